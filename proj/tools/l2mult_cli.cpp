/**
 * @file l2mult_cli.cpp
 * @brief Command line front end: character tables, spectral summaries,
 * Farber diagnostics and approximation runs.
 *
 * Exit codes: 0 success, 1 invalid input, 2 when some levels of a run failed.
 */
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "l2mult/approx_runner.hpp"
#include "l2mult/character_table.hpp"
#include "l2mult/characters.hpp"
#include "l2mult/error.hpp"
#include "l2mult/group_spec.hpp"
#include "l2mult/spectral.hpp"

using namespace l2mult;
using nlohmann::json;

namespace {

/// Inline JSON, or the name of a file holding it.
json json_argument(const std::string& text) {
  if (std::filesystem::exists(text)) {
    std::ifstream in(text);
    return json::parse(in);
  }
  return json::parse(text);
}

std::string complex_text(Complex z) {
  std::ostringstream o;
  o << std::setprecision(6);
  const double re = std::abs(z.real()) < 1e-12 ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 1e-12 ? 0.0 : z.imag();
  if (im == 0)
    o << re;
  else
    o << re << (im < 0 ? "-" : "+") << std::abs(im) << "i";
  return o.str();
}

int cmd_table(const std::string& spec, const std::string& format) {
  auto g = finite_group_from_spec(spec);
  auto t = CharacterTable::compute(g);
  if (format == "json") {
    json j;
    j["group"] = spec;
    j["order"] = g->order();
    j["classes"] = json::array();
    for (std::size_t k = 0; k < g->class_count(); ++k)
      j["classes"].push_back({{"rep", g->label(g->class_rep(k))}, {"size", g->class_size(k)}});
    j["characters"] = json::array();
    for (const auto& chi : t.characters()) {
      json row = json::array();
      for (const auto& v : chi.values()) row.push_back(complex_text(v));
      j["characters"].push_back(row);
    }
    std::cout << j.dump(2) << '\n';
    return 0;
  }
  std::cout << spec << ": order " << g->order() << ", " << g->class_count() << " classes\n";
  std::cout << std::setw(6) << "size";
  for (std::size_t k = 0; k < g->class_count(); ++k) std::cout << std::setw(14) << g->class_size(k);
  std::cout << '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::cout << std::setw(6) << ("X" + std::to_string(i));
    for (const auto& v : t[i].values()) std::cout << std::setw(14) << complex_text(v);
    std::cout << '\n';
  }
  return 0;
}

int cmd_spectral(const std::string& a_text, const std::string& q_text, unsigned kmax, std::size_t level,
                 const std::string& format) {
  const json aj = json_argument(a_text);
  const BuiltinPtr g = builtin_group_from_json(aj.at("group"));
  const auto a = GroupRingMatrix::parse(g, aj.at("matrix").get<std::vector<std::vector<std::string>>>());
  const auto chain = chain_from_json(json_argument(q_text), g);
  if (level >= chain->size()) fail(ErrorKind::ConfigInvalid, "quotient level out of range");
  const auto& lvl = chain->level(level);
  const auto pushed = lvl.quotient()->push_matrix(a);
  const FiniteRep rho = FiniteRep::from_action(GroupAction::on_left_cosets(lvl.fiber()));

  const auto rn = rank_nullity(pushed, rho);
  json out;
  out["index"] = lvl.index();
  out["rank"] = to_string(rn.rank);
  out["nullity"] = to_string(rn.nullity);
  out["exact"] = rn.exact;
  const bool square = a.rows() == a.cols();
  const bool selfadjoint = square && a.adjoint() == a;
  if (selfadjoint) {
    const auto mu = spectral_measure(pushed, rho);
    out["atoms"] = json::array();
    for (const auto& at : mu.atoms) out["atoms"].push_back({{"value", at.value}, {"multiplicity", at.multiplicity}});
    out["log_fk_det"] = log_fk_det(mu);
    out["fk_det"] = fk_det(mu);
    out["moments"] = json::array();
    for (const auto& r : moments_check(pushed, rho, kmax))
      out["moments"].push_back({{"k", r.k}, {"moment", r.moment}, {"trace", r.trace}});
  } else {
    out["note"] = "spectral measure needs a self-adjoint matrix";
  }
  if (format == "json") {
    std::cout << out.dump(2) << '\n';
    return 0;
  }
  std::cout << "level " << level << ", index " << lvl.index() << '\n';
  std::cout << "rank " << out["rank"].get<std::string>() << ", nullity " << out["nullity"].get<std::string>()
            << (rn.exact ? " (exact)" : " (numerical)") << '\n';
  if (!selfadjoint) {
    std::cout << out["note"].get<std::string>() << '\n';
    return 0;
  }
  std::cout << "atoms (value, multiplicity / " << lvl.index() * a.rows() << "):\n";
  for (const auto& at : out["atoms"])
    std::cout << "  " << std::setprecision(10) << at["value"].get<double>() << "  " << at["multiplicity"] << '\n';
  std::cout << "Fuglede-Kadison determinant " << std::setprecision(12) << out["fk_det"].get<double>() << '\n';
  std::cout << "k  moment  trace\n";
  for (const auto& r : out["moments"])
    std::cout << r["k"] << "  " << r["moment"].get<double>() << "  " << r["trace"].get<double>() << '\n';
  return 0;
}

void print_diagnostics(const ConvergenceReport& rep) {
  std::cout << "farber: level word fraction\n";
  for (const auto& r : rep.farber) std::cout << "  " << r.level << ' ' << r.word << ' ' << to_string(r.fraction) << '\n';
  if (!rep.rel_farber.empty()) {
    std::cout << "relative farber: level g h psi limit deviation\n";
    for (const auto& r : rep.rel_farber)
      std::cout << "  " << r.level << ' ' << r.g << ' ' << r.h << ' ' << to_string(r.value) << ' ' << to_string(r.limit)
                << ' ' << to_string(r.deviation) << '\n';
  }
  std::cout << "centralizer index: level word index\n";
  for (const auto& r : rep.centralizers) std::cout << "  " << r.level << ' ' << r.word << ' ' << r.index << '\n';
  for (const auto& n : rep.notes) std::cout << "note: " << n << '\n';
}

void print_run(const ConvergenceReport& rep) {
  for (const auto& l : rep.levels) {
    std::cout << "level " << l.level;
    if (l.error) {
      std::cout << " failed: " << *l.error << '\n';
      continue;
    }
    std::cout << "  index " << l.index << "  N " << l.normalizer << "  betti";
    for (auto b : l.betti) std::cout << ' ' << b;
    std::cout << "  (" << std::fixed << std::setprecision(3) << l.seconds << " s)\n" << std::defaultfloat;
    for (const auto& e : l.multiplicities)
      std::cout << "  p=" << e.p << " chi=" << e.chi << " m=" << e.raw << " m/N=" << to_string(e.normalized) << '\n';
    for (const auto& t : l.traces)
      std::cout << "  p=" << t.p << " h=" << t.h_label << " Tr=" << to_string(t.trace)
                << " Tr/N=" << to_string(t.normalized) << '\n';
  }
  for (const auto& s : rep.multiplicities) {
    std::cout << "p=" << s.p << " chi=" << s.chi << " prediction ";
    if (s.prediction)
      std::cout << to_string(*s.prediction) << " final deviation "
                << (s.final_deviation ? to_string(*s.final_deviation) : std::string("-"));
    else
      std::cout << "none";
    std::cout << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"L2-multiplicities of finite quotients"};
  app.require_subcommand(1);

  std::string format = "text";
  std::string out_dir;
  std::string out_format;
  std::size_t levels = 0;
  std::size_t parallel = 1;

  std::string group_spec;
  auto* table = app.add_subcommand("table", "Character table of a finite group, e.g. symmetric(4)");
  table->add_option("group", group_spec, "Finite group spec")->required();
  table->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string a_text, q_text;
  unsigned kmax = 6;
  std::size_t level = 0;
  auto* spectral = app.add_subcommand("spectral", "Rank, spectral measure and moments of a group ring matrix");
  spectral->add_option("A", a_text, "JSON (or file): {\"group\": ..., \"matrix\": [[...]]}")->required();
  spectral->add_option("quotient", q_text, "JSON (or file) chain description")->required();
  spectral->add_option("--kmax", kmax, "Highest moment");
  spectral->add_option("--level", level, "Chain level to use");
  spectral->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string config_path;
  auto add_run_options = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory");
    sub->add_option("--format", out_format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));
    sub->add_option("--levels", levels, "Use only the first n levels");
    sub->add_option("--parallel", parallel, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto* farber = app.add_subcommand("farber", "Farber and relative Farber diagnostics of a chain");
  add_run_options(farber);
  auto* runsub = app.add_subcommand("run", "Run an approximation experiment");
  add_run_options(runsub);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*table) return cmd_table(group_spec, format);
    if (*spectral) return cmd_spectral(a_text, q_text, kmax, level, format);

    const auto cfg = ExperimentConfig::load(config_path);
    RunOptions opts;
    if (levels > 0) opts.max_levels = levels;
    opts.parallel = parallel;
    const std::string fmt = out_format.empty() ? cfg.format : out_format;
    const std::filesystem::path dir = !out_dir.empty() ? std::filesystem::path(out_dir)
                                      : !cfg.out_dir.empty() ? std::filesystem::path(config_path).parent_path() / cfg.out_dir
                                                             : std::filesystem::path(".");
    if (*farber) {
      const auto rep = diagnostics(cfg, opts);
      print_diagnostics(rep);
      if (!out_dir.empty()) emit(rep, dir, "json");
      return 0;
    }
    const auto rep = run(cfg, opts);
    print_run(rep);
    print_diagnostics(rep);
    emit(rep, dir, fmt);
    std::cout << "wrote " << (dir / rep.name).string() << ".{" << fmt << "}\n";
    return rep.has_failures() ? 2 : 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << "error: invalid JSON: " << e.what() << '\n';
    return 1;
  }
}
