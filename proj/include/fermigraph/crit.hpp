#pragma once

#include <array>
#include <span>
#include <vector>

#include "fermigraph/gsfid.hpp"
#include "fermigraph/model.hpp"
#include "fermigraph/solver.hpp"

namespace fermigraph {

/// Hessian of F_Z(X) at X = 0 in the (mu, gamma) plane.
struct HessianAtZero {
  double d2_mumu = 0.0;
  double d2_gammagamma = 0.0;
  double d2_mugamma = 0.0;
  double h_crit = 0.0;  // smaller eigenvalue, <= 0
  double h_other = 0.0;  // larger eigenvalue
  std::array<double, 2> zero_eigvec{0.0, 0.0};  // unit vector of h_other
};

/// Closes a Hessian from its three entries: both eigenvalues and the unit
/// eigenvector of the larger one, oriented with a nonnegative first nonzero
/// component.
HessianAtZero hessian_from_entries(double d2_mumu, double d2_gammagamma,
                                   double d2_mugamma);

/// Mixed central difference. Swapping the roles of the two axes swaps `pm`
/// and `mp`, which the grouping below makes bit-for-bit symmetric.
double mixed_second_difference(double pp, double mm, double pm, double mp,
                               double delta);

/// Which ground-state representation to evaluate fidelities in.
enum class StatePath { Auto, Dense, Circulant };

enum class HessianMethod { Analytic, FiniteDifference };

/// Ground state at one parameter point, in whichever representation the
/// path selects. `Auto` picks the circulant spectrum for cyclic models.
struct StateAt {
  ModelParams params;
  bool circulant = false;
  SpectralList spectrum;
  PolarForm polar;
  int parity = 0;
  bool well_defined = false;
};

StateAt prepare_state(const ModelParams& p, StatePath path = StatePath::Auto);

/// Fidelity between two prepared states. Throws DegenerateEndpoint.
FidelityValue fidelity_between(const StateAt& a, const StateAt& b);

struct FdOptions {
  double step = 0.0;  // <= 0 selects 1e-4 * max(1, |mu| + |gamma|)
  bool richardson = false;
  StatePath path = StatePath::Auto;
};

double default_fd_step(double mu, double gamma);

/// Central second differences of F around (mu, gamma).
/// Throws StencilCrossesTransition when any stencil point changes the sign of
/// det Z, and DegenerateEndpoint when a stencil point has det Z = 0.
HessianAtZero hessian_fd(const ModelParams& p, const FdOptions& opt = {});

/// Exact second-order expansion of F through the derivative of the polar
/// factor: dT = U X V^T with X_ij = (F_ij - F_ji) / (s_i + s_j), F = U^T dZ V.
/// One SVD per point. Throws DegeneratePoint when det Z = 0.
HessianAtZero hessian_polar(const ModelParams& p);

/// Cyclic models at any range: H_ab = -(1/4) sum_pairs d_a theta d_b theta.
HessianAtZero hessian_circulant(const ModelParams& p);

/// h_crit through the cheapest exact route for the model.
HessianAtZero hessian_analytic(const ModelParams& p);

HessianAtZero hessian(const ModelParams& p, HessianMethod method,
                      const FdOptions& opt = {});

struct CyclicAnalytic {
  double h_crit = 0.0;
  double S = 0.0;
  HessianAtZero hessian;
};

/// h = -(1/4)[(mu-1)^2 + gamma^2] S on the fully-connected ring.
/// Throws SingularPoint at (1, 0) or when a paired |zeta_j| vanishes.
CyclicAnalytic h_analytic_cyclic(int L, double mu, double gamma);

enum class AsymptoticRegime { Generic, CriticalMu, CriticalGamma };

AsymptoticRegime classify_regime(double mu, double gamma);

/// Large-L form of h_crit on the fully-connected ring.
double h_asymptotic(int L, double mu, double gamma);

enum class SweepAxis { Mu, Gamma };

struct Sweep {
  SweepAxis axis = SweepAxis::Mu;
  double fixed = 0.0;  // value of the other parameter
  double from = 0.0;
  double to = 1.0;
  int count = 201;
};

struct BoundaryPoint {
  double mu = 0.0;
  double gamma = 0.0;
  int parity_below = 0;  // det Z sign at the smaller swept value
  int parity_above = 0;
  bool exact_zero = false;  // landed exactly on det Z = 0
};

inline constexpr double kBoundaryTolerance = 1e-10;

/// Sign of det Z at a point, from the circulant spectrum for cyclic models.
int det_z_sign(const ModelParams& p);

/// Sign changes of det Z along a 1-D sweep, refined by bisection.
std::vector<BoundaryPoint> first_order_boundary(const ModelTemplate& model, int L,
                                                const Sweep& sweep);

struct PeakOptions {
  std::vector<int> sizes;
  double gamma = 1.5;
  double lo = 0.5;
  double hi = 1.5;
  bool scale_window = false;  // window becomes 1 + [lo, hi] / L
  int grid_points = 201;
  double tolerance = 1e-8;
  HessianMethod method = HessianMethod::Analytic;
  bool parallel = true;
};

struct ScalingSeries {
  std::vector<int> sizes;
  std::vector<double> peak_positions;
  std::vector<double> peak_depths;
  std::vector<std::vector<std::array<double, 2>>> collapsed;  // ((mu-1)L, h/L^2)
  std::vector<std::vector<double>> flagged;  // mu values whose h failed
};

/// Grid bracketing plus golden-section refinement of the minimum of h_crit
/// in mu, for each L. Throws WindowError when the grid minimum is on an edge.
ScalingSeries peak_scan(const ModelTemplate& model, const PeakOptions& opt);

/// h_crit / L^2 at mu = 1 + x / L for each x.
std::vector<double> collapsed_curve(const ModelTemplate& model, int L, double gamma,
                                    std::span<const double> xs,
                                    HessianMethod method = HessianMethod::Analytic);

/// Second (and first) derivatives of E0 / L by central differences.
struct EnergyDerivatives {
  double d_mu = 0.0;
  double d_gamma = 0.0;
  double d2_mumu = 0.0;
  double d2_gammagamma = 0.0;
  double d2_mugamma = 0.0;
};

double energy_density(const ModelParams& p);

EnergyDerivatives energy_derivatives(const ModelParams& p, double step);

struct TPrimeZero {
  Matrix t_prime;
  double trace_closed = 0.0;  // Tr[T'(0)]^2 from the closed form
  double trace_matrix = 0.0;  // same, summed from the matrix
  double h_crit = 0.0;        // trace_closed / 8
};

/// dT/dgamma at gamma = 0 for the fully-connected free-ends model, mu > 1.
/// Throws OutOfDomain for mu <= 1.
TPrimeZero t_prime_zero(int L, double mu);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Least-squares y = c / L, with the largest relative residual.
struct InverseLawFit {
  double c = 0.0;
  double max_relative_residual = 0.0;
};

InverseLawFit fit_inverse_law(std::span<const int> sizes, std::span<const double> y);

}  // namespace fermigraph
