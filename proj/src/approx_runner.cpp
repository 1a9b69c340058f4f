#include "l2mult/approx_runner.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "l2mult/character_table.hpp"
#include "l2mult/characters.hpp"
#include "l2mult/error.hpp"
#include "l2mult/group_spec.hpp"

namespace l2mult {

namespace {

using nlohmann::json;

[[noreturn]] void invalid(const std::string& msg) { fail(ErrorKind::ConfigInvalid, msg); }

Rational rational_from_json(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) return parse_rational(j.dump());
  invalid("expected a number or a rational string");
}

std::string r2s(const Rational& q) { return to_string(q); }
Rational s2r(const json& j) { return parse_rational(j.get<std::string>()); }

std::string decimal(const Rational& q) {
  std::ostringstream o;
  o << std::setprecision(12) << to_double(q);
  return o.str();
}

std::vector<std::size_t> moduli_from(const json& c) {
  if (c.contains("moduli")) return c.at("moduli").get<std::vector<std::size_t>>();
  if (c.contains("depth")) {
    const auto base = c.value("base", std::size_t{2});
    std::vector<std::size_t> m;
    std::size_t v = 1;
    for (std::size_t k = 0; k < c.at("depth").get<std::size_t>(); ++k) m.push_back(v *= base);
    return m;
  }
  invalid("chain template needs \"moduli\" or \"depth\"");
}

std::size_t free_part_divisor(const BuiltinGroup& g) {
  switch (g.family()) {
    case Family::FreeByFinite: return g.finite_part()->order();
    case Family::DihedralInfinite: return 2;
    default: return 1;
  }
}

std::string word_label(const Word& w) { return w.is_identity() ? "1" : w.to_string(); }

LevelRecord compute_level(const ExperimentConfig& cfg, const CharacterTable& table,
                          const std::vector<std::size_t>& chis, std::size_t n) {
  LevelRecord rec;
  rec.level = n;
  const auto start = std::chrono::steady_clock::now();
  try {
    const auto qc = quotient_complex(cfg.complex, cfg.chain->level(n), cfg.h);
    rec.index = qc.index;
    const std::size_t div = cfg.normalization == Normalization::FreePart ? free_part_divisor(*cfg.group) : 1;
    if (rec.index % div != 0) fail(ErrorKind::InvalidArgument, "level does not lie in the free part");
    rec.normalizer = rec.index / div;
    const auto rep = multiplicities(qc, table);
    rec.betti = rep.betti;
    for (auto p : cfg.degrees) {
      if (p >= rep.betti.size()) continue;
      for (auto k : chis) {
        MultiplicityEntry e;
        e.p = p;
        e.chi = k;
        e.chi_degree = table[k].degree_int();
        e.raw = rep.multiplicity[p][k];
        e.normalized = Rational(e.raw, static_cast<unsigned long>(rec.normalizer));
        e.normalized.canonicalize();
        rec.multiplicities.push_back(e);
      }
      for (Element x = 1; x < cfg.h.group->order(); ++x) {
        TraceEntry t;
        t.p = p;
        t.h = x;
        t.h_label = word_label(cfg.h.words[x]);
        t.trace = rep.traces[p][x];
        t.normalized = t.trace / Rational(static_cast<unsigned long>(rec.normalizer));
        t.normalized.canonicalize();
        rec.traces.push_back(t);
      }
    }
  } catch (const Error& e) {
    rec = LevelRecord{};
    rec.level = n;
    rec.error = e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

json entry_json(const MultiplicityEntry& e) {
  return {{"p", e.p}, {"chi", e.chi}, {"chi_degree", e.chi_degree}, {"raw", e.raw}, {"normalized", r2s(e.normalized)}};
}

json rational_list(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(r2s(q));
  return a;
}

std::vector<Rational> rational_list(const json& j) {
  std::vector<Rational> v;
  for (const auto& x : j) v.push_back(s2r(x));
  return v;
}

json optional_rational(const std::optional<Rational>& q) { return q ? json(r2s(*q)) : json(nullptr); }
std::optional<Rational> optional_rational(const json& j) {
  if (j.is_null()) return std::nullopt;
  return s2r(j);
}

}  // namespace

std::shared_ptr<const QuotientChain> chain_from_json(const json& c, const BuiltinPtr& g) {
  if (c.contains("template")) {
    const auto t = c.at("template").get<std::string>();
    const auto moduli = moduli_from(c);
    if (moduli.empty()) invalid("chain needs at least one level");
    if (t == "cyclic") {
      if (g->family() != Family::FreeAbelian || g->rank() != 1) invalid("cyclic chains need free_abelian(1)");
      return std::make_shared<const QuotientChain>(chains::cyclic(moduli));
    }
    if (t == "dihedral") {
      if (g->family() != Family::DihedralInfinite) invalid("dihedral chains need dihedral_infinite");
      const auto f = c.value("fiber", std::string("kernel"));
      if (f != "kernel" && f != "reflection") invalid("dihedral fiber must be kernel or reflection");
      return std::make_shared<const QuotientChain>(
          chains::dihedral(moduli, f == "kernel" ? chains::DihedralFiber::Kernel : chains::DihedralFiber::Reflection));
    }
    if (t == "abelianized_mod") return std::make_shared<const QuotientChain>(chains::abelianized_mod(g, moduli));
    invalid("unknown chain template '" + t + "'");
  }
  std::vector<FiniteIndexSubgroup> levels;
  for (const auto& l : c.at("levels")) {
    auto target = finite_group_from_spec(l.at("target").get<std::string>());
    auto q = std::make_shared<const QuotientMap>(g, target, l.at("images").get<std::vector<Element>>());
    const auto& f = l.value("fiber", json("kernel"));
    if (f.is_string() && f.get<std::string>() == "kernel")
      levels.push_back(FiniteIndexSubgroup::kernel(q));
    else
      levels.emplace_back(q, FiniteSubgroup::generated(target, f.get<std::vector<Element>>()));
  }
  if (levels.empty()) invalid("chain needs at least one level");
  return std::make_shared<const QuotientChain>(std::move(levels));
}

ExperimentConfig ExperimentConfig::from_json(const json& j, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  try {
    cfg.name = j.value("name", std::string("experiment"));
    cfg.group_json = j.at("group");
    cfg.group = builtin_group_from_json(cfg.group_json);

    cfg.complex_json = j.at("complex");
    json cj = cfg.complex_json;
    if (cj.is_string()) {
      const std::filesystem::path file = base_dir / cj.get<std::string>();
      std::ifstream in(file);
      if (!in) invalid("cannot read complex file " + file.string());
      cj = json::parse(in);
    }
    cfg.complex = EquivariantCWData::from_json(cj, cfg.group);
    cfg.complex.validate();

    cfg.chain_json = j.at("chain");
    cfg.chain = chain_from_json(cfg.chain_json, cfg.group);

    cfg.h_words = j.value("h", std::vector<std::string>{});
    std::vector<Word> hw;
    for (const auto& w : cfg.h_words) hw.push_back(Word::parse(cfg.group, w));
    cfg.h = finite_subgroup(cfg.group, hw);

    const auto irr = j.value("irreducibles", json("all"));
    if (irr.is_array())
      cfg.irreducibles = irr.get<std::vector<std::size_t>>();
    else if (!(irr.is_string() && irr.get<std::string>() == "all"))
      invalid("irreducibles must be \"all\" or a list of indices");
    if (j.contains("degrees")) {
      cfg.degrees = j.at("degrees").get<std::vector<std::size_t>>();
    } else {
      for (std::size_t p = 0; p <= cfg.complex.dimension(); ++p) cfg.degrees.push_back(p);
    }
    for (auto p : cfg.degrees)
      if (p > cfg.complex.dimension()) invalid("degree " + std::to_string(p) + " exceeds the complex dimension");
    if (j.contains("l2_betti"))
      for (const auto& [k, v] : j.at("l2_betti").items()) cfg.l2_betti[std::stoul(k)] = rational_from_json(v);
    cfg.infinite_centralizers_asserted = j.value("infinite_centralizers", false);
    const auto norm = j.value("normalization", std::string("group"));
    if (norm == "group")
      cfg.normalization = Normalization::Group;
    else if (norm == "free_part")
      cfg.normalization = Normalization::FreePart;
    else
      invalid("normalization must be group or free_part");
    if (j.contains("probes")) {
      cfg.probes = j.at("probes").get<std::vector<std::string>>();
    } else {
      for (std::size_t i = 0; i < cfg.group->generator_count(); ++i) cfg.probes.push_back(cfg.group->generator_name(i));
    }
    for (const auto& w : cfg.probes) Word::parse(cfg.group, w);
    if (j.contains("output")) {
      cfg.out_dir = j.at("output").value("dir", std::string());
      cfg.format = j.at("output").value("format", std::string("both"));
    }
    if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both") invalid("format must be csv, json or both");

    const auto table = CharacterTable::compute(cfg.h.group);
    for (auto k : cfg.irreducibles)
      if (k >= table.size()) invalid("irreducible index " + std::to_string(k) + " out of range");
  } catch (const json::exception& e) {
    invalid(std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigInvalid) throw;
    invalid(std::string("config: ") + e.what());
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    invalid(std::string("config is not JSON: ") + e.what());
  }
  return from_json(j, path.parent_path());
}

json ExperimentConfig::to_json() const {
  json j;
  j["name"] = name;
  j["group"] = group_json;
  j["complex"] = complex_json;
  j["chain"] = chain_json;
  j["h"] = h_words;
  j["irreducibles"] = irreducibles.empty() ? json("all") : json(irreducibles);
  j["degrees"] = degrees;
  json b = json::object();
  for (const auto& [p, v] : l2_betti) b[std::to_string(p)] = r2s(v);
  j["l2_betti"] = b;
  j["infinite_centralizers"] = infinite_centralizers_asserted;
  j["normalization"] = normalization == Normalization::Group ? "group" : "free_part";
  j["probes"] = probes;
  j["output"] = {{"dir", out_dir}, {"format", format}};
  return j;
}

std::vector<FarberRow> farber_diagnostic(const QuotientChain& chain, const std::vector<Word>& probes) {
  std::vector<FarberRow> rows;
  for (std::size_t n = 0; n < chain.size(); ++n) {
    const auto& lvl = chain.level(n);
    const auto& q = *lvl.target();
    const auto& k = lvl.fiber();
    for (const auto& w : probes) {
      const Element g = lvl.quotient()->evaluate(w);
      std::size_t fixed = 0;
      for (auto f : k.left_coset_reps())
        if (k.contains(q.mul(q.inv(f), q.mul(g, f)))) ++fixed;
      FarberRow r;
      r.level = n;
      r.word = word_label(w);
      r.fraction = Rational(static_cast<unsigned long>(fixed), static_cast<unsigned long>(k.index()));
      r.fraction.canonicalize();
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

std::vector<RelFarberRow> rel_farber_diagnostic(const QuotientChain& chain, const BuiltinFiniteSubgroup& h,
                                                const std::vector<Word>& probes, bool infinite_centralizers_asserted) {
  std::vector<RelFarberRow> rows;
  for (std::size_t n = 0; n < chain.size(); ++n) {
    const auto& lvl = chain.level(n);
    const auto psi = biset_character(lvl, h);
    for (const auto& w : probes) {
      const Element g = lvl.quotient()->evaluate(w);
      for (Element x = 0; x < h.group->order(); ++x) {
        RelFarberRow r;
        r.level = n;
        r.g = word_label(w);
        r.h = word_label(h.words[x]);
        r.value = psi.value(g, x);
        r.limit = limit_biset_value(chain.group(), w, h.words[x], infinite_centralizers_asserted);
        r.deviation = abs(r.value - r.limit);
        r.deviation.canonicalize();
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

std::vector<std::size_t> centralizer_growth(const QuotientChain& chain, const Word& w) {
  std::vector<std::size_t> out;
  for (const auto& lvl : chain.levels()) out.push_back(lvl.target()->centralizer_index(lvl.quotient()->evaluate(w)));
  return out;
}

bool ConvergenceReport::has_failures() const {
  for (const auto& l : levels)
    if (l.error) return true;
  return false;
}

ConvergenceReport diagnostics(const ExperimentConfig& cfg, const RunOptions& options) {
  if (!cfg.chain) invalid("config has no chain");
  const std::size_t levels = std::min(cfg.chain->size(), options.max_levels.value_or(cfg.chain->size()));
  ConvergenceReport rep;
  rep.name = cfg.name;
  std::vector<Word> probes;
  for (const auto& w : cfg.probes) probes.push_back(Word::parse(cfg.group, w));
  std::vector<FiniteIndexSubgroup> used(cfg.chain->levels().begin(), cfg.chain->levels().begin() + static_cast<long>(levels));
  const QuotientChain chain(std::move(used));
  rep.farber = farber_diagnostic(chain, probes);
  if (cfg.h.group->order() > 1) {
    try {
      rep.rel_farber = rel_farber_diagnostic(chain, cfg.h, probes, cfg.infinite_centralizers_asserted);
    } catch (const Error& e) {
      rep.notes.push_back(std::string("relative Farber diagnostic unavailable: ") + e.what());
    }
  }
  std::vector<Word> central = probes;
  for (Element x = 1; x < cfg.h.group->order(); ++x) central.push_back(cfg.h.words[x]);
  for (const auto& w : central) {
    const auto growth = centralizer_growth(chain, w);
    for (std::size_t n = 0; n < growth.size(); ++n) rep.centralizers.push_back({n, word_label(w), growth[n]});
  }
  return rep;
}

ConvergenceReport run(const ExperimentConfig& cfg, const RunOptions& options) {
  if (!cfg.chain) invalid("config has no chain");
  const auto table = CharacterTable::compute(cfg.h.group);
  std::vector<std::size_t> chis = cfg.irreducibles;
  if (chis.empty())
    for (std::size_t k = 0; k < table.size(); ++k) chis.push_back(k);

  const std::size_t levels = std::min(cfg.chain->size(), options.max_levels.value_or(cfg.chain->size()));
  ConvergenceReport rep;
  rep.name = cfg.name;
  rep.levels.resize(levels);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t n; (n = next++) < levels;) rep.levels[n] = compute_level(cfg, table, chis, n);
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(options.parallel, levels));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const bool route = cfg.group->family() != Family::FreeByFinite || cfg.infinite_centralizers_asserted;
  if (!cfg.l2_betti.empty() && !route)
    rep.notes.push_back("no prediction: free-by-finite groups need the infinite-centralizer assertion");
  for (auto p : cfg.degrees) {
    for (auto k : chis) {
      MultiplicitySeries s;
      s.p = p;
      s.chi = k;
      for (const auto& l : rep.levels)
        for (const auto& e : l.multiplicities)
          if (e.p == p && e.chi == k) s.values.push_back(e.normalized);
      if (route && cfg.l2_betti.contains(p)) {
        s.prediction = Rational(table[k].degree_int(), static_cast<unsigned long>(cfg.h.group->order())) * cfg.l2_betti.at(p);
        s.prediction->canonicalize();
        if (!s.values.empty()) {
          s.final_deviation = abs(s.values.back() - *s.prediction);
          s.final_deviation->canonicalize();
        }
      }
      rep.multiplicities.push_back(std::move(s));
    }
    for (Element x = 1; x < cfg.h.group->order(); ++x) {
      TraceSeries s;
      s.p = p;
      s.h = word_label(cfg.h.words[x]);
      for (const auto& l : rep.levels)
        for (const auto& t : l.traces)
          if (t.p == p && t.h == x) s.values.push_back(t.normalized);
      rep.traces.push_back(std::move(s));
    }
  }

  const auto diag = diagnostics(cfg, options);
  rep.farber = diag.farber;
  rep.rel_farber = diag.rel_farber;
  rep.centralizers = diag.centralizers;
  rep.notes.insert(rep.notes.end(), diag.notes.begin(), diag.notes.end());
  return rep;
}

json ConvergenceReport::to_json() const {
  json j;
  j["name"] = name;
  j["levels"] = json::array();
  for (const auto& l : levels) {
    json lj{{"level", l.level}, {"index", l.index}, {"normalizer", l.normalizer}, {"betti", l.betti},
            {"seconds", l.seconds}, {"error", l.error ? json(*l.error) : json(nullptr)}};
    lj["multiplicities"] = json::array();
    for (const auto& e : l.multiplicities) lj["multiplicities"].push_back(entry_json(e));
    lj["traces"] = json::array();
    for (const auto& t : l.traces)
      lj["traces"].push_back({{"p", t.p}, {"h", t.h}, {"h_label", t.h_label}, {"trace", r2s(t.trace)},
                              {"normalized", r2s(t.normalized)}});
    j["levels"].push_back(lj);
  }
  j["multiplicities"] = json::array();
  for (const auto& s : multiplicities)
    j["multiplicities"].push_back({{"p", s.p}, {"chi", s.chi}, {"values", rational_list(s.values)},
                                   {"prediction", optional_rational(s.prediction)},
                                   {"final_deviation", optional_rational(s.final_deviation)}});
  j["traces"] = json::array();
  for (const auto& s : traces) j["traces"].push_back({{"p", s.p}, {"h", s.h}, {"values", rational_list(s.values)}});
  j["farber"] = json::array();
  for (const auto& r : farber) j["farber"].push_back({{"level", r.level}, {"word", r.word}, {"fraction", r2s(r.fraction)}});
  j["rel_farber"] = json::array();
  for (const auto& r : rel_farber)
    j["rel_farber"].push_back({{"level", r.level}, {"g", r.g}, {"h", r.h}, {"value", r2s(r.value)},
                               {"limit", r2s(r.limit)}, {"deviation", r2s(r.deviation)}});
  j["centralizers"] = json::array();
  for (const auto& r : centralizers) j["centralizers"].push_back({{"level", r.level}, {"word", r.word}, {"index", r.index}});
  j["notes"] = notes;
  return j;
}

ConvergenceReport ConvergenceReport::from_json(const json& j) {
  try {
    ConvergenceReport r;
    r.name = j.at("name").get<std::string>();
    for (const auto& lj : j.at("levels")) {
      LevelRecord l;
      l.level = lj.at("level").get<std::size_t>();
      l.index = lj.at("index").get<std::size_t>();
      l.normalizer = lj.at("normalizer").get<std::size_t>();
      l.betti = lj.at("betti").get<std::vector<std::size_t>>();
      l.seconds = lj.at("seconds").get<double>();
      if (!lj.at("error").is_null()) l.error = lj.at("error").get<std::string>();
      for (const auto& e : lj.at("multiplicities"))
        l.multiplicities.push_back({e.at("p").get<std::size_t>(), e.at("chi").get<std::size_t>(),
                                    e.at("chi_degree").get<long>(), e.at("raw").get<long>(), s2r(e.at("normalized"))});
      for (const auto& t : lj.at("traces"))
        l.traces.push_back({t.at("p").get<std::size_t>(), t.at("h").get<Element>(), t.at("h_label").get<std::string>(),
                            s2r(t.at("trace")), s2r(t.at("normalized"))});
      r.levels.push_back(std::move(l));
    }
    for (const auto& s : j.at("multiplicities"))
      r.multiplicities.push_back({s.at("p").get<std::size_t>(), s.at("chi").get<std::size_t>(),
                                  rational_list(s.at("values")), optional_rational(s.at("prediction")),
                                  optional_rational(s.at("final_deviation"))});
    for (const auto& s : j.at("traces"))
      r.traces.push_back({s.at("p").get<std::size_t>(), s.at("h").get<std::string>(), rational_list(s.at("values"))});
    for (const auto& f : j.at("farber"))
      r.farber.push_back({f.at("level").get<std::size_t>(), f.at("word").get<std::string>(), s2r(f.at("fraction"))});
    for (const auto& f : j.at("rel_farber"))
      r.rel_farber.push_back({f.at("level").get<std::size_t>(), f.at("g").get<std::string>(), f.at("h").get<std::string>(),
                              s2r(f.at("value")), s2r(f.at("limit")), s2r(f.at("deviation"))});
    for (const auto& c : j.at("centralizers"))
      r.centralizers.push_back({c.at("level").get<std::size_t>(), c.at("word").get<std::string>(),
                                c.at("index").get<std::size_t>()});
    r.notes = j.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const json::exception& e) {
    fail(ErrorKind::ParseError, std::string("report: ") + e.what());
  }
}

void write_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "level,index,normalizer,p,chi,chi_degree,raw,normalized,normalized_decimal,prediction,deviation\n";
  for (const auto& l : report.levels) {
    if (l.error) continue;
    for (const auto& e : l.multiplicities) {
      std::optional<Rational> pred;
      for (const auto& s : report.multiplicities)
        if (s.p == e.p && s.chi == e.chi) pred = s.prediction;
      out << l.level << ',' << l.index << ',' << l.normalizer << ',' << e.p << ',' << e.chi << ',' << e.chi_degree << ','
          << e.raw << ',' << to_string(e.normalized) << ',' << decimal(e.normalized) << ',';
      if (pred) {
        Rational dev = abs(e.normalized - *pred);
        dev.canonicalize();
        out << to_string(*pred) << ',' << to_string(dev);
      } else {
        out << "none,";
      }
      out << '\n';
    }
  }
}

void emit(const ConvergenceReport& report, const std::filesystem::path& dir, const std::string& format) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::IoError, "cannot create " + dir.string() + ": " + ec.message());
  auto open = [&](const std::string& ext) {
    const auto path = dir / (report.name + ext);
    std::ofstream out(path);
    if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
    return out;
  };
  if (format == "csv" || format == "both") {
    auto out = open(".csv");
    write_csv(report, out);
    if (!out) fail(ErrorKind::IoError, "write failed for " + report.name + ".csv");
  }
  if (format == "json" || format == "both") {
    auto out = open(".json");
    out << report.to_json().dump(2) << '\n';
    if (!out) fail(ErrorKind::IoError, "write failed for " + report.name + ".json");
  }
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* s = std::getenv("L2MULT_SEED");
  if (s == nullptr || *s == '\0') return fallback;
  char* end = nullptr;
  const auto v = std::strtoull(s, &end, 0);
  return *end == '\0' ? v : fallback;
}

}  // namespace l2mult
