// Copyright 2026 The qtransit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtransit/dfo.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qtransit {

namespace {

struct BudgetExhausted {};
struct TargetReached {};

class Evaluator {
   public:
    Evaluator(const Objective &f, const DfoOptions &opts, DfoResult &res) : f_(f), opts_(opts), res_(res) {
        res_.f_best = std::numeric_limits<double>::infinity();
    }

    std::vector<double> clamp(std::vector<double> x) const {
        for (size_t i = 0; i < x.size(); i++) {
            if (!opts_.lower.empty()) x[i] = std::max(x[i], opts_.lower[i]);
            if (!opts_.upper.empty()) x[i] = std::min(x[i], opts_.upper[i]);
        }
        return x;
    }

    double operator()(const std::vector<double> &x) {
        if (res_.evals >= opts_.max_evals) throw BudgetExhausted{};
        double v = f_(x);
        res_.evals++;
        res_.trace.push_back({x, v});
        if (v < res_.f_best) {
            res_.f_best = v;
            res_.x_best = x;
        }
        if (v <= opts_.f_target) throw TargetReached{};
        return v;
    }

   private:
    const Objective &f_;
    const DfoOptions &opts_;
    DfoResult &res_;
};

void check_inputs(const std::vector<double> &x0, const DfoOptions &opts) {
    if (x0.empty()) throw std::invalid_argument("optimizer: need at least one free parameter");
    if ((!opts.lower.empty() && opts.lower.size() != x0.size()) ||
        (!opts.upper.empty() && opts.upper.size() != x0.size())) {
        throw std::invalid_argument("optimizer: bounds have the wrong dimension");
    }
    if (opts.max_evals < 1 || !(opts.rho_begin > 0.0) || !(opts.rho_end > 0.0)) {
        throw std::invalid_argument("optimizer: invalid options");
    }
}

// Step of length rho along +-e_i, flipped if it would leave the box.
std::vector<double> axis_point(const Evaluator &ev, const std::vector<double> &base, size_t i, double rho,
                               const DfoOptions &opts) {
    std::vector<double> x = base;
    double up = base[i] + rho;
    if (!opts.upper.empty() && up > opts.upper[i]) {
        x[i] = base[i] - rho;
    } else {
        x[i] = up;
    }
    return ev.clamp(x);
}

double norm(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); i++) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

void nelder_mead_loop(Evaluator &ev, std::vector<std::vector<double>> &pts, std::vector<double> &vals,
                      const DfoOptions &opts) {
    const size_t n = pts.size() - 1;
    std::vector<size_t> order(n + 1);
    while (true) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return vals[a] < vals[b]; });
        const size_t best = order.front();
        const size_t worst = order.back();
        const size_t second = order[n - 1];
        double diam = 0.0;
        for (size_t j = 0; j <= n; j++) diam = std::max(diam, norm(pts[j], pts[best]));
        if (diam < opts.rho_end) return;

        std::vector<double> centroid(n, 0.0);
        for (size_t j = 0; j <= n; j++) {
            if (j == worst) continue;
            for (size_t i = 0; i < n; i++) centroid[i] += pts[j][i] / static_cast<double>(n);
        }
        auto along = [&](double coef) {
            std::vector<double> x(n);
            for (size_t i = 0; i < n; i++) x[i] = centroid[i] + coef * (pts[worst][i] - centroid[i]);
            return ev.clamp(x);
        };
        auto xr = along(-1.0);
        double fr = ev(xr);
        if (fr < vals[best]) {
            auto xe = along(-2.0);
            double fe = ev(xe);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = xr;
            vals[worst] = fr;
            continue;
        }
        bool outside = fr < vals[worst];
        auto xc = along(outside ? -0.5 : 0.5);
        double fc = ev(xc);
        if (fc < (outside ? fr : vals[worst])) {
            pts[worst] = xc;
            vals[worst] = fc;
            continue;
        }
        for (size_t j = 0; j <= n; j++) {
            if (j == best) continue;
            for (size_t i = 0; i < n; i++) pts[j][i] = pts[best][i] + 0.5 * (pts[j][i] - pts[best][i]);
            pts[j] = ev.clamp(pts[j]);
            vals[j] = ev(pts[j]);
        }
    }
}

}  // namespace

DfoResult minimize_trust_region(const Objective &f, std::vector<double> x0, const DfoOptions &opts) {
    check_inputs(x0, opts);
    DfoResult res;
    Evaluator ev(f, opts, res);
    const size_t n = x0.size();
    double rho = opts.rho_begin;

    std::vector<std::vector<double>> pts;
    std::vector<double> vals;
    try {
        pts.push_back(ev.clamp(std::move(x0)));
        vals.push_back(ev(pts[0]));
        for (size_t i = 0; i < n; i++) {
            pts.push_back(axis_point(ev, pts[0], i, rho, opts));
            vals.push_back(ev(pts.back()));
        }

        while (true) {
            size_t b = static_cast<size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
            // Rows: displacement of every non-best point from the best one.
            std::vector<size_t> idx;
            for (size_t j = 0; j <= n; j++) {
                if (j != b) idx.push_back(j);
            }
            Eigen::MatrixXd D(n, n);
            Eigen::VectorXd df(n);
            for (size_t r = 0; r < n; r++) {
                for (size_t i = 0; i < n; i++) D(r, i) = pts[idx[r]][i] - pts[b][i];
                df(r) = vals[idx[r]] - vals[b];
            }
            Eigen::FullPivLU<Eigen::MatrixXd> lu(D);
            lu.setThreshold(1e-10);
            if (!lu.isInvertible()) {
                for (size_t r = 0; r < n; r++) {
                    pts[idx[r]] = axis_point(ev, pts[b], r, rho, opts);
                    vals[idx[r]] = ev(pts[idx[r]]);
                }
                continue;
            }
            Eigen::MatrixXd Dinv = lu.inverse();
            Eigen::VectorXd g = Dinv * df;

            // Geometry: pull in the farthest point along its Lagrange gradient.
            size_t far_r = 0;
            double far_d = -1.0;
            for (size_t r = 0; r < n; r++) {
                double d = norm(pts[idx[r]], pts[b]);
                if (d > far_d) {
                    far_d = d;
                    far_r = r;
                }
            }
            if (far_d > 2.0 * rho) {
                Eigen::VectorXd u = Dinv.col(static_cast<Eigen::Index>(far_r));
                u.normalize();
                double sign = g.dot(u) > 0.0 ? -1.0 : 1.0;
                std::vector<double> x(n);
                for (size_t i = 0; i < n; i++) x[i] = pts[b][i] + sign * rho * u(static_cast<Eigen::Index>(i));
                x = ev.clamp(x);
                pts[idx[far_r]] = x;
                vals[idx[far_r]] = ev(x);
                continue;
            }

            const double gnorm = g.norm();
            if (gnorm == 0.0) {
                bool all_equal = std::all_of(vals.begin(), vals.end(), [&](double v) { return v == vals[b]; });
                if (all_equal) {
                    res.used_simplex_fallback = true;
                    nelder_mead_loop(ev, pts, vals, opts);
                    res.stop_reason = "simplex fallback converged";
                    return res;
                }
            }

            bool success = false;
            if (gnorm > 0.0) {
                std::vector<double> x(n);
                for (size_t i = 0; i < n; i++) x[i] = pts[b][i] - rho * g(static_cast<Eigen::Index>(i)) / gnorm;
                x = ev.clamp(x);
                Eigen::VectorXd step(n);
                for (size_t i = 0; i < n; i++) step(static_cast<Eigen::Index>(i)) = x[i] - pts[b][i];
                double pred = -g.dot(step);
                if (step.norm() > 1e-3 * rho && pred > 0.0) {
                    double fx = ev(x);
                    double ratio = (vals[b] - fx) / pred;
                    // Lagrange values of the trial point decide which point it replaces.
                    Eigen::VectorXd ell = Dinv.transpose() * step;
                    size_t rep = 0;
                    double score = -1.0;
                    for (size_t r = 0; r < n; r++) {
                        double dist = norm(pts[idx[r]], x) / rho;
                        double s = std::abs(ell(static_cast<Eigen::Index>(r))) * std::max(1.0, dist * dist);
                        if (s > score) {
                            score = s;
                            rep = r;
                        }
                    }
                    if (fx < vals[b] || score > 1.0) {
                        pts[idx[rep]] = x;
                        vals[idx[rep]] = fx;
                    }
                    success = ratio >= 0.1;
                }
            }
            if (!success) {
                rho *= 0.5;
                if (rho < opts.rho_end) {
                    res.stop_reason = "trust region radius below rho_end";
                    return res;
                }
            }
        }
    } catch (const BudgetExhausted &) {
        res.stop_reason = "evaluation budget exhausted";
    } catch (const TargetReached &) {
        res.stop_reason = "target value reached";
    }
    return res;
}

DfoResult minimize_nelder_mead(const Objective &f, std::vector<double> x0, const DfoOptions &opts) {
    check_inputs(x0, opts);
    DfoResult res;
    res.used_simplex_fallback = true;
    Evaluator ev(f, opts, res);
    const size_t n = x0.size();
    try {
        std::vector<std::vector<double>> pts{ev.clamp(std::move(x0))};
        std::vector<double> vals{ev(pts[0])};
        for (size_t i = 0; i < n; i++) {
            pts.push_back(axis_point(ev, pts[0], i, opts.rho_begin, opts));
            vals.push_back(ev(pts.back()));
        }
        nelder_mead_loop(ev, pts, vals, opts);
        res.stop_reason = "simplex diameter below rho_end";
    } catch (const BudgetExhausted &) {
        res.stop_reason = "evaluation budget exhausted";
    } catch (const TargetReached &) {
        res.stop_reason = "target value reached";
    }
    return res;
}

}  // namespace qtransit
