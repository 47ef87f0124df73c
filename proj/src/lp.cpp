#include "seuvote/lp.hpp"

#include "seuvote/rng.hpp"

#include <stdexcept>

namespace seuvote {

LpSolution maximize(const LinearProgram& lp) {
    const std::size_t m = lp.rows.size();
    const std::size_t n = lp.objective.size();
    for (const auto& b : lp.bounds)
        if (b.sign() < 0) throw std::invalid_argument("maximize: bounds must be nonnegative");
    if (lp.bounds.size() != m) throw std::invalid_argument("maximize: bound count mismatch");

    // tableau columns: n structural, m slack, then rhs
    const std::size_t width = n + m + 1;
    std::vector<std::vector<Rational>> t(m + 1, std::vector<Rational>(width));
    std::vector<std::size_t> basis(m);
    for (std::size_t i = 0; i < m; ++i) {
        if (lp.rows[i].size() != n) throw std::invalid_argument("maximize: row width mismatch");
        for (std::size_t j = 0; j < n; ++j) t[i][j] = lp.rows[i][j];
        t[i][n + i] = Rational(1);
        t[i][width - 1] = lp.bounds[i];
        basis[i] = n + i;
    }
    // objective row holds reduced costs as -c
    for (std::size_t j = 0; j < n; ++j) t[m][j] = -lp.objective[j];

    for (;;) {
        std::size_t enter = width;
        for (std::size_t j = 0; j + 1 < width; ++j)
            if (t[m][j].sign() < 0) { enter = j; break; }
        if (enter == width) break;

        std::size_t leave = m;
        Rational best_ratio;
        for (std::size_t i = 0; i < m; ++i) {
            if (t[i][enter].sign() <= 0) continue;
            Rational ratio = t[i][width - 1] / t[i][enter];
            if (leave == m || ratio < best_ratio || (ratio == best_ratio && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = std::move(ratio);
            }
        }
        if (leave == m) return LpSolution{false, {}, {}};

        const Rational pivot = t[leave][enter];
        for (auto& x : t[leave]) x /= pivot;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == leave || t[i][enter].is_zero()) continue;
            const Rational factor = t[i][enter];
            for (std::size_t j = 0; j < width; ++j)
                if (!t[leave][j].is_zero()) t[i][j] -= factor * t[leave][j];
        }
        basis[leave] = enter;
    }

    LpSolution sol;
    sol.point.assign(n, Rational(0));
    for (std::size_t i = 0; i < m; ++i)
        if (basis[i] < n) sol.point[basis[i]] = t[i][width - 1];
    sol.value = t[m][width - 1];
    return sol;
}

std::optional<std::vector<Rational>> find_strict_point(int num_vars, const std::vector<StrictRow>& rows) {
    // variables x_0..x_{k-1}, margin t last; maximize t with t <= row(x),
    // t <= x_j, x_j <= 1, t <= 1
    const auto k = static_cast<std::size_t>(num_vars);
    LinearProgram lp;
    lp.objective.assign(k + 1, Rational(0));
    lp.objective[k] = Rational(1);
    auto add = [&](std::vector<Rational> row, Rational bound) {
        lp.rows.push_back(std::move(row));
        lp.bounds.push_back(std::move(bound));
    };
    for (const auto& r : rows) {
        if (r.size() != k) throw std::invalid_argument("find_strict_point: row width mismatch");
        std::vector<Rational> row(k + 1);
        for (std::size_t j = 0; j < k; ++j) row[j] = -r[j];
        row[k] = Rational(1);
        add(std::move(row), Rational(0));
    }
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<Rational> lower(k + 1);
        lower[j] = Rational(-1);
        lower[k] = Rational(1);
        add(std::move(lower), Rational(0));
        std::vector<Rational> upper(k + 1);
        upper[j] = Rational(1);
        add(std::move(upper), Rational(1));
    }
    std::vector<Rational> cap(k + 1);
    cap[k] = Rational(1);
    add(std::move(cap), Rational(1));

    const LpSolution sol = maximize(lp);
    if (!sol.bounded || sol.value.sign() <= 0) return std::nullopt;
    Rational total;
    for (std::size_t j = 0; j < k; ++j) total += sol.point[j];
    std::vector<Rational> x(sol.point.begin(), sol.point.begin() + static_cast<long>(k));
    for (auto& v : x) v /= total;
    return x;
}

std::optional<std::vector<Rational>> find_strict_point_jittered(int num_vars, const std::vector<StrictRow>& rows,
                                                                Rng& rng, long denominator_bound) {
    auto base = find_strict_point(num_vars, rows);
    if (!base) return base;
    std::vector<Rational> q(static_cast<std::size_t>(num_vars));
    Rational total;
    for (auto& v : q) {
        v = Rational(rng.uniform(1, std::max<long>(denominator_bound, 2)));
        total += v;
    }
    for (auto& v : q) v /= total;
    // largest admissible lambda is the min over rows with row(q) < 0 of
    // row(x) / (row(x) - row(q)); stay at half of it and never above 1/2
    Rational lambda(1, 2);
    for (const auto& r : rows) {
        Rational rx, rq;
        for (std::size_t j = 0; j < q.size(); ++j) {
            rx += r[j] * (*base)[j];
            rq += r[j] * q[j];
        }
        if (rq.sign() < 0) lambda = std::min(lambda, rx / (rx - rq) / Rational(2));
    }
    std::vector<Rational> out(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) out[j] = (Rational(1) - lambda) * (*base)[j] + lambda * q[j];
    return out;
}

}  // namespace seuvote
