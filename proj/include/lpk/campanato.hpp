#pragma once
// Discrete Morrey-Campanato machinery: windowed polynomial least squares,
// oscillation values |Q|^{-s} (mean_Q |h - P|^p)^{1/p}, their maximal
// functions over dyadic-length windows, and classical seminorms.
//
// Window convention: contiguous, non-wrapping index windows [start,
// start+len); scans use lengths {2, 4, ..., N/2} at every admissible start.
// |Q| = len * T / N in time units. p = 2 projects exactly; p != 2 keeps the
// L^2 projection as a surrogate minimizer (experimental, flagged on output).

#include <vector>

#include "lpk/grid.hpp"
#include "lpk/signal.hpp"

namespace lpk {

struct PolyWindow {
  int start = 0;
  int len = 0;
};

// Least-squares projection onto polynomials of degree < i on the window, in
// the shifted-scaled Legendre basis u = (t - center)/(len/2). i = 0 gives the
// zero polynomial; i > len throws (rank deficiency).
struct PolyCoeffs {
  int degree_bound = 0;  // i
  PolyWindow window;
  std::vector<std::vector<cplx>> comp_coeffs;  // per component, Legendre basis

  // Value of component c's projection at absolute sample index t.
  cplx eval(std::size_t c, int t) const;
};

PolyCoeffs poly_project(const SampledSignal& h, const PolyWindow& window, int i);
PolyCoeffs poly_project(const VectorSignal& h, const PolyWindow& window, int i);

enum class MaximalVariant { Containing, Centered };  // M and M-tilde

struct MaximalProfile {
  SampleGrid grid;
  int i = 0;
  double p = 2.0;
  double s = 0.0;
  MaximalVariant variant = MaximalVariant::Containing;
  bool l2_surrogate = false;  // set when p != 2
  std::vector<double> values;
};

// Pointwise maximal function over all dyadic-length windows containing
// (variant Containing) or centered at (variant Centered) each sample. Near
// the boundary the admissible window set shrinks; an empty set yields 0.
// Requires i >= 0, p >= 1, s in (-1/p, i] (s <= 0 allowed only with i = 0
// through s in (-1/p, 0]).
MaximalProfile maximal_function(const SampledSignal& h, int i, double p, double s,
                                MaximalVariant variant);
MaximalProfile maximal_function(const VectorSignal& h, int i, double p, double s,
                                MaximalVariant variant);

// Global norm: max of the oscillation value over every dyadic-length window.
double campanato_norm(const SampledSignal& h, int i, double p, double s);
double campanato_norm(const VectorSignal& h, int i, double p, double s);

// campanato_norm(f, 1, 2, 0).
double bmo_norm(const SampledSignal& f);

// sup |f(x) - f(y)| / |x - y|^s over sample pairs with |x - y| <= T/2
// (wrap-around pairs excluded). s in (0, 1].
double lip_seminorm(const SampledSignal& f, double s);

// sup over x and steps h = k T/N of |Delta_h^alpha f(x)| / h^s, restricted to
// alpha * h <= T/2 and windows that do not wrap.
double diff_seminorm(const SampledSignal& f, int alpha, double s);

struct PolyNormComparison {
  double max_sup_ratio = 0.0;     // sup_{Q1}|p| vs (|Q1|/|Q|)^i (mean_Q |p|^2)^{1/2}
  double max_nested_ratio = 0.0;  // projection-difference vs oscillation on 2I
  int skipped = 0;                // degenerate denominators
};

// Random-polynomial comparison of sup norms on nested windows against scaled
// quadratic means, plus the nested-window projection-difference bound.
PolyNormComparison poly_norm_comparison_check(const SampleGrid& grid, int i, int trials,
                                              std::uint64_t seed);

}  // namespace lpk
