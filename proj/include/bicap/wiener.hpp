#pragma once

// Layer decomposition of the complement of a domain near the origin,
// per-layer capacities and the weighted series built from them.

#include <Eigen/Dense>

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bicap/capacity.hpp"

namespace bicap {

enum class LayerSpan {
  Single,  ///< closed annulus [a^-j, a^-j+1]
  Double,  ///< closed annulus [a^-j, a^-j+2], for the necessity series
};

/// Layer j of the complement dilated by a^j, so that it lies in [1, a]
/// (Single) or [1, a^2] (Double). std::nullopt marks an empty layer.
using LayerFamily = std::function<std::optional<CompactumSpec>(int j)>;

struct LayerOptions {
  int j_min = 0;
  int resolution = 32;
  CgOptions cg;
  Neighbourhood neighbourhood = Neighbourhood::Dilated;
  LayerSpan span = LayerSpan::Single;
};

struct LayerTerm {
  int j = 0;
  Eigen::Matrix4d gram = Eigen::Matrix4d::Zero();  // at the layer's true scale
  double gamma = 0.0;                              // lambda_min(gram)
  PiProfile b_min;
  double weight = 0.0;  // a^-j
  double term = 0.0;    // weight * gamma
  double partial = 0.0;
  bool empty = true;
  int iterations = 0;
};

struct LayerSeries {
  double a = 2.0;
  LayerSpan span = LayerSpan::Single;
  int j_min = 0;
  int j_max = 0;
  int resolution = 0;
  std::vector<LayerTerm> terms;
};

/// Gram matrices of layers j_min..j_max. Each layer is solved at unit
/// scale on C_{1/2, 2a} (or C_{1/2, 2a^2}) and rescaled with
/// Cap(K / lambda) = lambda Cap(K); layers with identical masks are solved
/// once. Throws std::invalid_argument for a < 2 or an empty j range.
LayerSeries layer_capacities(const LayerFamily& family, double a, int j_max,
                             const LayerOptions& opts = {});

/// S_l = sum over j <= l of a^-j gamma_j.
std::vector<double> sufficiency_sum(const LayerSeries& series);

struct NecessitySum {
  std::vector<double> values;  // lambda_min of the weighted Gram sums
  PiProfile b_min;             // minimizer of the last value
};

/// value_l = lambda_min(sum over j <= l of a^-j G_j). Throws
/// std::invalid_argument unless the series uses LayerSpan::Double.
NecessitySum necessity_sum(const LayerSeries& series);

enum class VerdictKind { AnalyticDivergent, AnalyticConvergent, NumericTrend };
enum class TrendModel { Bounded, Logarithmic, Linear };

std::string to_string(VerdictKind k);
std::string to_string(TrendModel m);

struct RegularityVerdict {
  VerdictKind kind = VerdictKind::NumericTrend;
  std::optional<TrendModel> model;
  std::vector<double> partial_sums;
  std::array<double, 3> model_residuals{};  // bounded, log, linear
  double tail_exponent = 0.0;  // increments ~ l^-p; NaN when not positive
  std::string source;
};

/// Least-squares fit of the last half of the partial sums against
/// A + B q^l (or A + B/l, A + B/l^2), A + B log l and A + B l. Near ties go
/// to the simpler model in that order. Throws std::invalid_argument for
/// fewer than 8 sums.
RegularityVerdict verdict(const std::vector<double>& partial_sums);

/// Sum of the series terms for j = 2..l. Built with ratio a^2 and layers
/// in units of R, this is the capacity sum in the exponent of the decay
/// estimate for |grad u| + |u|/|x|. Throws std::out_of_range for l outside
/// [2, j_max] or a series starting above j = 2.
double decay_factor(const LayerSeries& series, int l);

}  // namespace bicap
