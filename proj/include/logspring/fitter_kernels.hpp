#pragma once

// Data-parallel inner loops of the fitter. Each kernel has a serial reference
// and an OpenMP version; the two must agree bit for bit because every grid
// point is computed independently and reduced serially afterwards.

#include "logspring/fitter.hpp"

#include <span>
#include <vector>

namespace logspring::kernels {

struct ModelFrame {
    double theta = 1.0;
    double t_shift = 0.0;
    double t_ref = 1.0;
    Envelope envelope = Envelope::constant;
};

struct LinearFit {
    double offset = 0.0;
    double amp_sin = 0.0;
    double amp_cos = 0.0;
    /// Residual sum of squares, summed from explicit residuals.
    double rss = 0.0;
    bool full_rank = false;
};

/// Design columns [1, env sin(phase), env cos(phase)] at each sample.
void design_matrix(std::span<const double> t, const ModelFrame& frame, std::span<double> col_one,
                   std::span<double> col_sin, std::span<double> col_cos);

/// Least squares for (offset, amp_sin, amp_cos) via Householder QR of the N x 3
/// design. Rank deficiency (|R_jj| <= 1e-12 max column norm) sets full_rank = false.
LinearFit solve_linear(std::span<const double> t, std::span<const double> y,
                       const ModelFrame& frame);

/// RSS over a theta grid; rank-deficient points give +inf.
std::vector<double> scan_rss_serial(std::span<const double> t, std::span<const double> y,
                                    std::span<const double> theta_grid, const ModelFrame& base);
std::vector<double> scan_rss_parallel(std::span<const double> t, std::span<const double> y,
                                      std::span<const double> theta_grid, const ModelFrame& base);

/// Index of the smallest RSS; ties (within 1e-15 relative) go to the lowest index.
std::size_t argmin_first(std::span<const double> rss);

std::vector<double> periodogram_serial(std::span<const double> t, std::span<const double> y,
                                       std::span<const double> theta_grid,
                                       const ModelFrame& base);
std::vector<double> periodogram_parallel(std::span<const double> t, std::span<const double> y,
                                         std::span<const double> theta_grid,
                                         const ModelFrame& base);

} // namespace logspring::kernels
