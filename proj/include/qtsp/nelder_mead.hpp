#pragma once

#include <algorithm>
#include <functional>
#include <vector>

namespace qtsp {

// Budgeted downhill simplex. Every objective evaluation is reported through
// `record` (in call order); the search stops as soon as the evaluation budget
// is exhausted. Returns nothing: the caller tracks the best via `record`.
//
// Standard coefficients: reflection 1, expansion 2, contraction 0.5,
// shrink 0.5. Restart handling is left to the caller.
class NelderMead {
public:
    using Objective = std::function<double(const std::vector<double>&)>;
    using Record = std::function<void(const std::vector<double>&, double)>;

    NelderMead(Objective objective, Record record, int max_evaluations)
        : objective_(std::move(objective)),
          record_(std::move(record)),
          budget_(max_evaluations) {}

    int remaining() const { return budget_ - used_; }

    // Runs one simplex descent from `start` until the simplex collapses or
    // the budget runs out. `step` sets the initial vertex offsets.
    void run(const std::vector<double>& start, double step) {
        std::size_t dim = start.size();
        if (dim == 0 || remaining() <= 0) return;

        std::vector<std::vector<double>> pts;
        std::vector<double> vals;
        pts.push_back(start);
        vals.push_back(eval(start));
        for (std::size_t i = 0; i < dim && remaining() > 0; ++i) {
            std::vector<double> v = start;
            v[i] += step;
            pts.push_back(v);
            vals.push_back(eval(v));
        }
        if (pts.size() < dim + 1) return;  // budget died during setup

        while (remaining() > 0) {
            std::vector<std::size_t> idx(pts.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            std::sort(idx.begin(), idx.end(),
                      [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
            std::size_t best = idx.front(), worst = idx.back(), second = idx[idx.size() - 2];

            if (vals[worst] - vals[best] < 1e-12) break;  // collapsed

            std::vector<double> centroid(dim, 0.0);
            for (std::size_t i = 0; i < idx.size(); ++i) {
                if (idx[i] == worst) continue;
                for (std::size_t d = 0; d < dim; ++d) centroid[d] += pts[idx[i]][d];
            }
            for (double& c : centroid) c /= static_cast<double>(dim);

            auto blend = [&](double alpha) {
                std::vector<double> p(dim);
                for (std::size_t d = 0; d < dim; ++d)
                    p[d] = centroid[d] + alpha * (pts[worst][d] - centroid[d]);
                return p;
            };

            std::vector<double> reflected = blend(-1.0);
            double fr = eval(reflected);
            if (fr < vals[best]) {
                if (remaining() > 0) {
                    std::vector<double> expanded = blend(-2.0);
                    double fe = eval(expanded);
                    if (fe < fr) {
                        pts[worst] = std::move(expanded);
                        vals[worst] = fe;
                        continue;
                    }
                }
                pts[worst] = std::move(reflected);
                vals[worst] = fr;
            } else if (fr < vals[second]) {
                pts[worst] = std::move(reflected);
                vals[worst] = fr;
            } else {
                if (remaining() <= 0) break;
                std::vector<double> contracted = blend(fr < vals[worst] ? -0.5 : 0.5);
                double fc = eval(contracted);
                if (fc < std::min(fr, vals[worst])) {
                    pts[worst] = std::move(contracted);
                    vals[worst] = fc;
                } else {
                    // shrink toward the best vertex
                    for (std::size_t i = 0; i < pts.size() && remaining() > 0; ++i) {
                        if (i == best) continue;
                        for (std::size_t d = 0; d < dim; ++d)
                            pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
                        vals[i] = eval(pts[i]);
                    }
                }
            }
        }
    }

private:
    double eval(const std::vector<double>& x) {
        ++used_;
        double v = objective_(x);
        record_(x, v);
        return v;
    }

    Objective objective_;
    Record record_;
    int budget_;
    int used_ = 0;
};

}  // namespace qtsp
