#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace bellkit {

/// A prescribed joint table over a subset of the scenario's variables.
/// Cells follow lexicographic outcome order with -1 before +1 and the first
/// listed variable most significant.
struct MarginalConstraint {
  std::vector<std::string> variables;
  std::vector<double> table;
};

/// Input of the marginal problem: +-1 variables and prescribed subset tables.
struct MarginalScenario {
  std::vector<std::string> variables;
  std::vector<MarginalConstraint> constraints;

  std::size_t index_of(const std::string& name) const;  // throws invalid_argument
};

inline constexpr std::size_t kMaxFeasibilityVariables = 16;
inline constexpr std::size_t kMaxOracleVariables = 10;
inline constexpr double kTableTolerance = 1e-9;
inline constexpr double kFeasibilityTolerance = 1e-7;

/// Structural checks plus overlap agreement of sub-marginals within 1e-9.
/// Throws invalid_argument for malformed input and precondition when two
/// constraints disagree on a shared sub-marginal.
void validate_scenario(const MarginalScenario& scenario);

struct CertificateTerm {
  std::size_t constraint = 0;
  std::size_t cell = 0;
  double coefficient = 0;
};

/// Linear functional on the constraint tables. Every joint distribution gives
/// it a value of at most `bound`; the prescribed tables give `value`.
struct Certificate {
  std::string kind;         // "chsh" or "farkas"
  std::string description;  // e.g. E(Aa,Bb) + E(Aa,Bc) + E(Ad,Bb) - E(Ad,Bc)
  std::vector<CertificateTerm> terms;
  double value = 0;
  double bound = 0;
};

struct FeasibilityResult {
  bool feasible = false;
  /// Joint over all 2^n atoms, first variable most significant, -1 before +1.
  std::optional<std::vector<double>> witness;
  std::optional<Certificate> certificate;
  double residual = 0;     // minimum L1 mismatch of the marginal-matching LP
  bool exact = false;      // decided in rational arithmetic
};

/// Decides whether the constraint tables extend to one joint distribution.
/// Throws size_limit for n > 16.
FeasibilityResult joint_feasibility(const MarginalScenario& scenario);

/// Same question decided by enumerating the 2^n deterministic assignments and
/// testing convex-hull membership with an exact rational LP. n <= 10.
FeasibilityResult deterministic_vertex_oracle(const MarginalScenario& scenario);

/// Evaluates a certificate's functional on the scenario tables.
double certificate_value(const Certificate& certificate, const MarginalScenario& scenario);

/// Marginal of a joint over all variables onto `subset` (in the given order).
std::vector<double> marginalize(const MarginalScenario& scenario, const std::vector<double>& joint,
                                const std::vector<std::string>& subset);

enum class Cyclicity { acyclic, cyclic };

const char* to_string(Cyclicity c) noexcept;

/// Graham reduction over variable-name sets. Throws invalid_argument on names
/// not in `variables` or on an empty subset list.
Cyclicity vorobev_cyclicity(const std::vector<std::vector<std::string>>& subsets,
                            const std::vector<std::string>& variables);

Cyclicity vorobev_cyclicity(const MarginalScenario& scenario);

/// e_ab + e_ac + e_db - e_dc.
double chsh_facet_value(double e_ab, double e_ac, double e_db, double e_dc) noexcept;

/// Product expectation of a 2x2 table in lexicographic order.
double pair_table_expectation(const std::vector<double>& table) noexcept;

}  // namespace bellkit
