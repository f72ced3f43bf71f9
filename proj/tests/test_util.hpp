#pragma once

#include <cmath>
#include <functional>

#include "cosdyn/core_model.hpp"

namespace cosdyn::testutil {

/// Central differences of a scalar function of one matrix argument.
inline Mat fd_gradient(const Mat& x0, const std::function<double(const Mat&)>& f, double step = 1e-5) {
    Mat g(x0.rows(), x0.cols());
    Mat x = x0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double keep = x.data()[i];
        x.data()[i] = keep + step;
        const double fp = f(x);
        x.data()[i] = keep - step;
        const double fm = f(x);
        x.data()[i] = keep;
        g.data()[i] = (fp - fm) / (2.0 * step);
    }
    return g;
}

inline double rel_err(const Mat& a, const Mat& b) {
    const double den = std::max(a.norm(), b.norm());
    return den > 0.0 ? (a - b).norm() / den : 0.0;
}

inline Mat random_symmetric(int h, Rng& rng, double scale = 1.0) {
    const Mat a = gaussian_matrix(h, h, scale, rng);
    return 0.5 * (a + a.transpose());
}

}  // namespace cosdyn::testutil
