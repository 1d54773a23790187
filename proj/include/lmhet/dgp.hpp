#pragma once

#include <cstdint>
#include <string>

#include "lmhet/panel.hpp"
#include "lmhet/rng.hpp"

namespace lmhet {

// Simulated designs, named <error family>-<factor layout>:
//   family 1: i.i.d. N(0,1) idiosyncratic errors
//   family 2: heteroskedastic errors with a circular spatial moving average
//   layout a: one common factor only (group homogeneity holds)
//   layout b: common factor plus four group-specific factors, all distinct
//   layout c: as b, but the first three groups share one specific factor
//             (heterogeneity only in pairs involving the fourth group)
enum class DgpKind { OneA, TwoA, OneB, TwoB, OneC, TwoC };

DgpKind parse_dgp_kind(const std::string& name);  // "1-a" .. "2-c"
std::string dgp_kind_name(DgpKind kind);
bool dgp_has_group_factors(DgpKind kind);  // layouts b and c

struct DgpConfig {
  DgpKind kind = DgpKind::OneA;
  int N = 100;
  int T = 100;
  double b = 1.0;      // mean of the loading distributions
  double theta = 0.1;  // spatial moving-average coefficient (family 2)
  int P = 4;           // spatial moving-average bandwidth (family 2)
  double rho = 0.3;    // correlation between group-specific factors
  std::uint64_t seed = 0;
};

void validate_dgp(const DgpConfig& config);

// Scale applied to the idiosyncratic part so its variance matches the
// common-factor signal variance 1 + b^2:
//   family 1: sqrt(1 + b^2)
//   family 2: sqrt(12 (1 + b^2) / (13 (1 + 2 P theta^2)))
double dgp_kappa(const DgpConfig& config);

// Sizes of the four near-equal groups every design partitions its series
// into (the first N mod 4 groups absorb the remainder).
std::vector<int> dgp_group_sizes(int n);

struct GeneratedPanel {
  DataPanel panel;
  GroupStructure groups;  // four near-equal groups in all designs
};

// Draw one panel.  All randomness comes from rng in a fixed documented
// order: common loadings (N), group loadings (N, layouts b/c), common
// factor (T), group-specific factors (4 normals per period through the
// Cholesky factor of the equicorrelation matrix; layout c then replaces
// the second and third factors with the first),
// then the idiosyncratic part (family 1: N*T normals, series-major;
// family 2: N scale uniforms on (0.5, 1.5), then N*T normals series-major).
GeneratedPanel generate_dgp(const DgpConfig& config, RngStream& rng);

// Convenience wrapper seeding a fresh stream from config.seed.
GeneratedPanel generate_dgp(const DgpConfig& config);

}  // namespace lmhet
