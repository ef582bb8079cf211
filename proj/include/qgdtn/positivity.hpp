#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace qgdtn {

/// Positivity class of the semigroup (e^{-tM})_{t>=0}.
enum class Verdict {
  Strong,    // strongly positive
  Positive,  // positive, generator reducible
  Eventual,  // eventually strongly positive, not positive
  None,      // not eventually positive
  Marginal,  // a decisive quantity is within tolerance of zero
  Pole,      // M undefined (lambda at a pole)
};

std::string to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct ClassifierConfig {
  double sign_tolerance = 1e-11;  // relative to max |M_ij|
  std::vector<double> oracle_times;  // absolute times; empty means the default grid
  int power_k_max = 64;
};

struct MetzlerCheck {
  bool metzler = false;
  double margin = 0.0;  // min off-diagonal entry
};

/// -M Metzler check on the matrix passed in (already negated by the caller).
MetzlerCheck is_metzler(const Eigen::MatrixXd& negM, const ClassifierConfig& cfg = {});

/// Strong connectivity of the directed graph of nonzero off-diagonal entries.
/// Uses the exact support; the config is accepted for interface symmetry.
bool is_irreducible(const Eigen::MatrixXd& M, const ClassifierConfig& cfg = {});

struct Evidence {
  double metzler_margin = 0.0;        // min off-diagonal of -M
  bool irreducible = false;
  double spectral_bound = 0.0;        // of -M
  double spectral_gap = 0.0;          // distance to the next eigenvalue of -M
  int eigenspace_dim = 0;
  double projection_min = 0.0;        // min entry of the spectral projection
  Eigen::VectorXd dominant;           // sign-normalized eigenvector (dim 1 case)
  int power_k = -1;                   // first k with (mu I - M)^k >> 0, or -1
  bool power_agrees = true;
  double t0_bound = 0.0;              // time after which e^{-tM} >> 0 is guaranteed
  double robustness = 0.0;            // max-entry perturbation radius (x4) keeping the verdict
  std::string criterion;
};

struct SemigroupClass {
  Verdict verdict = Verdict::None;
  Evidence evidence;
};

/// Decides the class of (e^{-tM}) for symmetric M: Metzler + irreducible is
/// strong, Metzler + reducible is positive; otherwise the sign of the spectral
/// projection of -M at its spectral bound separates eventual from none.
SemigroupClass classify(const Eigen::MatrixXd& M, const ClassifierConfig& cfg = {});

enum class OracleClass { AllStrict, AllNonneg, EventuallyStrict, NotPositiveAtHorizon };

std::string to_string(OracleClass c);

struct OracleResult {
  OracleClass observed = OracleClass::NotPositiveAtHorizon;
  std::vector<double> times;
  std::vector<double> min_entry;     // min entry of e^{-tM} divided by its max entry
  double first_positive_time = -1.0; // start of the trailing strictly positive run
  double horizon = 0.0;
};

/// Default sample times for M: 24 geometric points over [1e-3, 1e3] / ||M||
/// followed by 8 points out to 1e7 / ||M||.
std::vector<double> default_oracle_times(const Eigen::MatrixXd& M);

/// Samples e^{-tM} and reports the observed positivity pattern.
OracleResult expm_oracle(const Eigen::MatrixXd& M, const ClassifierConfig& cfg = {});

// Verdict the oracle observation corresponds to.
Verdict oracle_verdict(OracleClass c);

struct GroupProbe {
  bool group_positive = false;     // e^{tM} >= 0 at every sampled t of both signs
  bool is_diagonal = false;
  bool implication_holds = false;  // group positive implies diagonal
};

GroupProbe group_positivity_probe(const Eigen::MatrixXd& M, const ClassifierConfig& cfg = {});

}  // namespace qgdtn
