#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fermigraph/crit.hpp"
#include "fermigraph/model.hpp"
#include "fermigraph/table.hpp"

namespace fermigraph {

enum class Quantity { FMin, HCrit, Log10H, DetZ, Gap, E0, N, Si, Parity };

std::string_view quantity_name(Quantity q);
Quantity parse_quantity(std::string_view name);

/// Evenly spaced values from..to inclusive; count = 1 gives just `from`.
struct Axis {
  double from = 0.0;
  double to = 0.0;
  int count = 1;

  std::vector<double> values() const;
};

/// Parses "a:b:n" or a single number "a".
Axis parse_axis(std::string_view text);

/// Per-row status bits. A row with no bit set is "ok".
enum StatusBit : unsigned {
  kDegenerate = 1u << 0,      // det Z = 0 at the point or a fidelity partner
  kParityChange = 1u << 1,    // fidelity partner lies across a first-order line
  kStencilCrosses = 1u << 2,  // Hessian stencil crosses a first-order line
  kSingular = 1u << 3,        // formula not defined at the point
  kCyclicOnly = 1u << 4,      // single-site quantities need a circulant model
  kTrivialLine = 1u << 5,     // next to mu = 1 - L, excluded from h maps
  kFailed = 1u << 6,          // any other error
};

std::string status_string(unsigned bits);

struct ScanSpec {
  ModelTemplate model;
  std::vector<int> sizes{101};
  Axis mu{0.0, 2.0, 11};
  Axis gamma{1.0, 1.0, 1};
  double dmu = 0.1;
  double dgamma = 0.1;
  std::vector<Quantity> quantities{Quantity::FMin};
  HessianMethod hessian = HessianMethod::Analytic;
  FdOptions fd;
  StatePath path = StatePath::Auto;  // Dense forces the O(L^3) route
  bool exclude_trivial_line = true;
  std::uint64_t seed = 0;

  /// Throws Error{Parameter} for an unusable spec.
  void validate() const;
};

struct ScanRow {
  int L = 0;
  double mu = 0.0;
  double gamma = 0.0;
  std::vector<double> values;  // one per requested quantity, NaN when flagged
  unsigned status = 0;
};

/// Evaluates one grid point. Never throws for per-point failures.
ScanRow evaluate_point(const ScanSpec& spec, int L, double mu, double gamma);

/// Rows ordered by L, then gamma, then mu (mu fastest), independent of the
/// number of threads. threads <= 0 keeps the OpenMP default.
std::vector<ScanRow> run_scan(const ScanSpec& spec, int threads = 0);

/// Single-threaded reference with the same output.
std::vector<ScanRow> run_scan_serial(const ScanSpec& spec);

Table scan_table(const ScanSpec& spec, const std::vector<ScanRow>& rows);

/// ((mu - 1) L, h / L^2) pairs per L, read back from a table with L, mu and
/// h_crit columns. Rows with a non-finite h are skipped.
std::vector<std::pair<int, std::vector<std::array<double, 2>>>> collapse_table(
    const Table& t);

/// Full-plane fidelity map of the fully-connected ring at L = 1001.
ScanSpec preset_fidelity_map();

/// Same plane for log10 |h_crit|.
ScanSpec preset_h_map();

/// gamma = 1.5, L = 101, 201, ..., 1001 around mu = 1.
PeakOptions preset_scaling();

}  // namespace fermigraph
