// Independent reference computations used only by the tests.

#pragma once

#include <cmath>
#include <complex>
#include <functional>

#include <Eigen/Dense>

#include "dephent/linalg.hpp"

namespace dephent::testing {

// Tr_E or Tr_S of a bipartite matrix by explicit index loops.
inline MatrixXc loop_partial_trace(const MatrixXc& m, Eigen::Index da, Eigen::Index db, int keep) {
    const Eigen::Index dk = keep == 0 ? da : db;
    MatrixXc out = MatrixXc::Zero(dk, dk);
    for (Eigen::Index a = 0; a < da; ++a)
        for (Eigen::Index b = 0; b < db; ++b)
            for (Eigen::Index a2 = 0; a2 < da; ++a2)
                for (Eigen::Index b2 = 0; b2 < db; ++b2) {
                    const auto v = m(a * db + b, a2 * db + b2);
                    if (keep == 0 && b == b2) out(a, a2) += v;
                    if (keep == 1 && a == a2) out(b, b2) += v;
                }
    return out;
}

inline MatrixXc loop_kron(const MatrixXc& a, const MatrixXc& b) {
    MatrixXc out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

// exp(-i H t) by scaling and squaring of a truncated Taylor series.
inline MatrixXc taylor_unitary(const MatrixXc& h, double t) {
    const double norm = h.cwiseAbs().rowwise().sum().maxCoeff() * std::abs(t);
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
    const MatrixXc a = std::complex<double>(0.0, -t / std::pow(2.0, squarings)) * h;
    MatrixXc term = MatrixXc::Identity(h.rows(), h.cols());
    MatrixXc sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    for (int k = 0; k < squarings; ++k) sum = sum * sum;
    return sum;
}

// Adaptive Simpson quadrature.
inline double simpson(const std::function<double(double)>& f, double a, double b, double eps, int depth = 50) {
    std::function<double(double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, int d) {
            const double mid = 0.5 * (lo + hi);
            const double lm = 0.5 * (lo + mid);
            const double rm = 0.5 * (mid + hi);
            const double flm = f(lm);
            const double frm = f(rm);
            const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
            const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
            if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) return left + right + (left + right - whole) / 15.0;
            return rec(lo, mid, flo, flm, fmid, left, d - 1) + rec(mid, hi, fmid, frm, fhi, right, d - 1);
        };
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    return rec(a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), depth);
}

// Simpson over `panels` equal sub-intervals, each refined adaptively.
inline double panel_simpson(const std::function<double(double)>& f, double a, double b, int panels, double eps) {
    const double w = (b - a) / panels;
    double sum = 0.0;
    for (int k = 0; k < panels; ++k) sum += simpson(f, a + k * w, a + (k + 1) * w, eps / panels);
    return sum;
}

// Central finite-difference gradient.
inline Eigen::VectorXd numeric_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                        const Eigen::VectorXd& x, double h = 1e-6) {
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Eigen::VectorXd xp = x;
        Eigen::VectorXd xm = x;
        xp[i] += h;
        xm[i] -= h;
        g[i] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

inline double h2(double p) {
    double v = 0.0;
    if (p > 0.0) v -= p * std::log2(p);
    if (p < 1.0) v -= (1.0 - p) * std::log2(1.0 - p);
    return v;
}

}  // namespace dephent::testing
