/**
 * @file approx_runner.hpp
 * @brief Approximation experiments along quotient chains: per-level
 * normalized multiplicities and traces, limit predictions, Farber
 * diagnostics, and CSV/JSON emission.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "l2mult/equivariant_complex.hpp"
#include "l2mult/quotient.hpp"
#include "l2mult/rational.hpp"

namespace l2mult {

/// Divisor N_n for the normalized values.  Group: [G : Gamma_n].  FreePart:
/// [F : Gamma_n] for the free part F of a free-by-finite group (or the
/// translation subgroup of the infinite dihedral group).
enum class Normalization { Group, FreePart };

struct ExperimentConfig {
  std::string name;
  BuiltinPtr group;
  /// Kept for serialization of free-by-finite groups.
  nlohmann::json group_json;
  EquivariantCWData complex;
  nlohmann::json complex_json;
  std::shared_ptr<const QuotientChain> chain;
  nlohmann::json chain_json;
  std::vector<std::string> h_words;
  BuiltinFiniteSubgroup h;
  /// Indices into the character table of H; empty means all.
  std::vector<std::size_t> irreducibles;
  std::vector<std::size_t> degrees;
  /// Supplied b_p^{(2)}(G) by degree.
  std::map<std::size_t, Rational> l2_betti;
  bool infinite_centralizers_asserted = false;
  Normalization normalization = Normalization::Group;
  std::vector<std::string> probes;
  std::string out_dir;
  std::string format = "both";

  /// Parses and validates; ConfigInvalid on any problem.  Relative complex
  /// file paths resolve against `base_dir`.
  static ExperimentConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
  static ExperimentConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

struct MultiplicityEntry {
  std::size_t p = 0;
  std::size_t chi = 0;
  long chi_degree = 1;
  long raw = 0;
  Rational normalized;
  bool operator==(const MultiplicityEntry&) const = default;
};

struct TraceEntry {
  std::size_t p = 0;
  Element h = 0;
  std::string h_label;
  Rational trace;
  Rational normalized;
  bool operator==(const TraceEntry&) const = default;
};

struct LevelRecord {
  std::size_t level = 0;
  /// [G : Gamma_n].
  std::size_t index = 0;
  /// Divisor N_n actually used.
  std::size_t normalizer = 0;
  std::vector<std::size_t> betti;
  std::vector<MultiplicityEntry> multiplicities;
  std::vector<TraceEntry> traces;
  double seconds = 0;
  /// Set when the level could not be computed; the other fields are empty.
  std::optional<std::string> error;

  bool operator==(const LevelRecord&) const = default;
};

struct FarberRow {
  std::size_t level = 0;
  std::string word;
  /// |{fK : g in f K f^-1}| / [Q : K].
  Rational fraction;
  bool operator==(const FarberRow&) const = default;
};

struct RelFarberRow {
  std::size_t level = 0;
  std::string g;
  std::string h;
  Rational value;
  Rational limit;
  Rational deviation;
  bool operator==(const RelFarberRow&) const = default;
};

struct CentralizerRow {
  std::size_t level = 0;
  std::string word;
  std::size_t index = 0;
  bool operator==(const CentralizerRow&) const = default;
};

struct MultiplicitySeries {
  std::size_t p = 0;
  std::size_t chi = 0;
  std::vector<Rational> values;
  std::optional<Rational> prediction;
  std::optional<Rational> final_deviation;
  bool operator==(const MultiplicitySeries&) const = default;
};

struct TraceSeries {
  std::size_t p = 0;
  std::string h;
  std::vector<Rational> values;
  bool operator==(const TraceSeries&) const = default;
};

struct ConvergenceReport {
  std::string name;
  std::vector<LevelRecord> levels;
  std::vector<MultiplicitySeries> multiplicities;
  std::vector<TraceSeries> traces;
  std::vector<FarberRow> farber;
  std::vector<RelFarberRow> rel_farber;
  std::vector<CentralizerRow> centralizers;
  /// Why a prediction or diagnostic is missing, if one is.
  std::vector<std::string> notes;

  bool has_failures() const;
  nlohmann::json to_json() const;
  static ConvergenceReport from_json(const nlohmann::json& j);
  bool operator==(const ConvergenceReport&) const = default;
};

/// {"template": "cyclic" | "dihedral" | "abelianized_mod", "moduli": [...]
/// or "depth": d (moduli base^1..base^d, base 2 by default), "fiber":
/// "kernel" | "reflection" for dihedral}, or {"levels": [{"target": spec,
/// "images": [...], "fiber": "kernel" | [elements]}...]}.  Connecting maps
/// are derived.  ConfigInvalid, ChainBroken.
std::shared_ptr<const QuotientChain> chain_from_json(const nlohmann::json& j, const BuiltinPtr& group);

std::vector<FarberRow> farber_diagnostic(const QuotientChain& chain, const std::vector<Word>& probes);

/// |psi_n(g, h) - i_G(g, h)| for every level, probe g and element h of H.
/// HNotNormalizing, UnsupportedFamily.
std::vector<RelFarberRow> rel_farber_diagnostic(const QuotientChain& chain, const BuiltinFiniteSubgroup& h,
                                                const std::vector<Word>& probes,
                                                bool infinite_centralizers_asserted = false);

/// [Q_n : C_{Q_n}(w)] per level.
std::vector<std::size_t> centralizer_growth(const QuotientChain& chain, const Word& w);

struct RunOptions {
  /// Only the first `max_levels` levels when set.
  std::optional<std::size_t> max_levels;
  std::size_t parallel = 1;
};

/// Farber, relative Farber and centralizer tables only; no quotient
/// complexes are built.
ConvergenceReport diagnostics(const ExperimentConfig& config, const RunOptions& options = {});

/// Levels run independently (in parallel when asked); a failing level is
/// recorded and the others continue.
ConvergenceReport run(const ExperimentConfig& config, const RunOptions& options = {});

/// One row per level x p x chi; header only for an empty report.
void write_csv(const ConvergenceReport& report, std::ostream& out);

/// Writes <name>.csv and/or <name>.json into `dir`; IoError on failure.
void emit(const ConvergenceReport& report, const std::filesystem::path& dir, const std::string& format);

/// L2MULT_SEED when set and numeric, else `fallback`.
std::uint64_t seed_from_env(std::uint64_t fallback);

}  // namespace l2mult
