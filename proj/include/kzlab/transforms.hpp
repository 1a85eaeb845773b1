// Spectral integrals of the Mellin kernels against the localized test
// function h, plus threshold scans of their decay in the argument size.
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "kzlab/kernels.hpp"
#include "kzlab/numeric.hpp"
#include "kzlab/spectral.hpp"

namespace kzlab {

// One lattice point of the spectral plane with its measure weight.
struct GridNode {
    SpectralPoint point;
    double weight = 0.0;  // spec(mu) * eta^2; real on the spectral line
};

/// Square lattice on the plane Re mu = 0, parameterized by (Im mu1, Im mu2)
/// around `center`; the third coordinate closes the zero-sum constraint.
/// half_width is snapped to a whole number of steps.
struct SpectralGrid {
    SpectralPoint center;
    double half_width = 0.0;
    double step = 0.0;

    /// half_width = 5R, step = R/8: for the decaying Gaussian this covers
    /// everything above 1e-16 of the peak of h.
    static SpectralGrid standard(const TestFunctionSpec& tf);

    std::size_t points_per_axis() const;

    /// Materialized lattice, row-major over (Im mu1, Im mu2).  Throws
    /// validation_error when the grid is degenerate (fewer than two steps
    /// per side) and budget_error beyond 4001 points per axis.
    std::vector<GridNode> nodes() const;
};

/// Optional per-node multiplier applied to h (weighted variants of the
/// integrals, e.g. h times approximate-functional-equation weights).  Must
/// be smooth on the grid scale; a constant multiplier scales the result
/// exactly.
using SpectralWeight = std::function<cplx(const SpectralPoint&)>;

/// Phi_w4(y) = int over Re mu = 0 of h(mu) K_w4(y; mu) spec(mu) dmu1 dmu2,
/// evaluated as the lattice sum over `grid` with one shared contour for all
/// nodes.  The Gamma-ratio tables factor over the three mu coordinates, so
/// the cost is O(axis * contour) tables plus O(nodes * contour) products
/// instead of independent kernel calls.  self_error is the coarsening
/// difference |value(eta) - value(2 eta)| plus a 1e-16 rounding floor on the
/// accumulated |h K| mass; a positive tolerance turns a larger self_error
/// into accuracy_error.  The grid must be centered at tf.mu0.
QuadratureResult phi_w4(double y, const TestFunctionSpec& tf,
                        const SpectralGrid& grid, ContourSpec contour = {},
                        int workers = 0, double tolerance = 0.0,
                        const SpectralWeight& weight = {});

/// Phi_w5(y) = int h(mu) K_w4(-y; -mu) spec(mu) dmu1 dmu2: same machinery
/// with the kernel argument reflected.  When the center is negation-closed
/// (mu0 a permutation of -mu0) the change of variables mu -> -mu gives
/// Phi_w5(y) = Phi_w4(-y) on the same grid.
QuadratureResult phi_w5(double y, const TestFunctionSpec& tf,
                        const SpectralGrid& grid, ContourSpec contour = {},
                        int workers = 0, double tolerance = 0.0,
                        const SpectralWeight& weight = {});

/// Phi_w6(y1, y2) = int h(mu) K_w6^{sgn y1, sgn y2}(y; mu) spec(mu) dmu1 dmu2
/// over the double contour.  spec(mu) is fused with the trigonometric factor
/// of the kernel before evaluation: for the ++ variant
///   spec * S^{++} = (1/24 pi^2) prod_j 3 nu_j sin(3 pi nu_j / 2),
/// and the mixed-sign variants trade their sin(3 pi nu_j / 2) denominators
/// against the tangents of spec the same way, so nodes with nu_j = 0 are
/// regular zeros of the measure instead of pole evaluations.  Trapezoid
/// contours only (the double sum pairs the banded row/col factors directly
/// against the diagonal 1/Gamma(s1+s2) factor per grid node).
QuadratureResult phi_w6(double y1, double y2, const TestFunctionSpec& tf,
                        const SpectralGrid& grid, ContourSpec contour = {},
                        int workers = 0, double tolerance = 0.0,
                        const SpectralWeight& weight = {});

enum class scan_transform { w4, w6 };

/// y-geometry of a decay scan: each T contributes one row below and one row
/// above the expected negligibility threshold.  For w4 the rows sit at
/// y = T^low and y = T^high; for w6 at y1 = y2 = Upsilon^2 with
/// Upsilon = T^low and T^high.  Zero-initialized fields select the defaults
/// (w4: 2.5 / 3.5, w6: 0.8 / 1.3).
struct ScanGeometry {
    double low_exponent = 0.0;
    double high_exponent = 0.0;

    static ScanGeometry default_for(scan_transform which);
};

struct ScanRow {
    double T = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;  // 0 for w4 rows
    double abs_phi = 0.0;
    double self_error = 0.0;
    std::uint64_t evaluations = 0;
};

struct ScanTable {
    std::vector<ScanRow> rows;
    bool truncated = false;  // wall-clock budget ran out; kept rows are valid
};

/// Runs the standard test function (TestFunctionSpec::standard(T, theta, A0)
/// on its standard grid) through the chosen transform at the two geometry
/// points per T.  Every T must lie in (0, 20]: beyond that the contours grow
/// past a desk-scale runtime.  A positive budget_seconds stops the scan
/// after the row that exceeds it (at least one row is always produced) and
/// marks the table truncated.
ScanTable decay_scan(scan_transform which, const std::vector<double>& T_values,
                     ScanGeometry geometry = {}, double theta = 0.5,
                     int A0 = 1, double budget_seconds = 0.0, int workers = 0);

}  // namespace kzlab
