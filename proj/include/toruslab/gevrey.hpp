#pragma once

#include "toruslab/fourier_taylor.hpp"

namespace toruslab {

struct GevreyNormParams {
    double alpha = 1.0;
    double beta = 1.0;
    double L1 = 1.0;
    double L2 = 1.0;
    // Action-domain radius: the sup over I is restricted to ||I|| <= rho.
    double rho = 1.0;
    // Total derivative orders inspected; -1 selects min(truncation bound,
    // 4), reduced to 2 for n >= 3 where the grids grow quickly.
    int K_check = -1;
    int M_check = -1;
};

struct GevreyNormEstimate {
    double alpha, beta, L1, L2;
    double rho;
    // Lower bound for sup_{(k,l)} sup_{(theta,I)}
    //   |d_theta^k d_I^l f| L1^{-|k|} L2^{-|l|} (k!)^{-alpha} (l!)^{-beta}
    // obtained from finitely many derivative orders and sample points.
    double value;
    int K_checked, M_checked;
    MultiIndex argmax_k, argmax_l;
};

GevreyNormEstimate gevrey_norm_estimate(const FourierTaylorSeries& f,
                                        const GevreyNormParams& params = {});

}  // namespace toruslab
