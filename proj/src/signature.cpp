#include "seuvote/signature.hpp"

#include "seuvote/lp.hpp"

#include <algorithm>
#include <stdexcept>

namespace seuvote {

int SignatureLayout::pair_index(OutcomeId a, OutcomeId b) const {
    const auto key = std::make_pair(std::min(a, b), std::max(a, b));
    for (std::size_t j = 0; j < outcome_pairs.size(); ++j)
        if (outcome_pairs[j] == key) return static_cast<int>(j);
    return -1;
}

SignatureLayout make_layout(const Mechanism& mech) {
    SignatureLayout layout;
    layout.num_states = mech.num_states();
    layout.num_outcomes = mech.outcomes.size();
    for (std::size_t c = 0; c < mech.cells.size(); ++c) {
        SignatureLayout::CellLayout cell;
        cell.cell = static_cast<int>(c);
        cell.states = mech.cells[c].states;
        if (auto ab = binary_outcomes(mech.cells[c].factor)) {
            int j = layout.pair_index(ab->first, ab->second);
            if (j < 0) {
                layout.outcome_pairs.emplace_back(std::min(ab->first, ab->second), std::max(ab->first, ab->second));
                j = static_cast<int>(layout.outcome_pairs.size()) - 1;
            }
            cell.outcome_pair = j;
            cell.comparisons = factor_comparisons(mech.cells[c].factor);
        }
        layout.cells.push_back(std::move(cell));
    }
    if (layout.outcome_pairs.size() > 31) throw std::length_error("too many distinct outcome pairs");
    return layout;
}

VoterType signature_of(const SignatureLayout& layout, const Preference& pref) {
    VoterType t;
    for (std::size_t j = 0; j < layout.outcome_pairs.size(); ++j) {
        const auto [x, y] = layout.outcome_pairs[j];
        if (pref.valuation[x] == pref.valuation[y]) throw GenericityViolation(-1, "valuation ties an outcome pair");
        if (pref.valuation[x] > pref.valuation[y]) t.orientation |= std::uint32_t{1} << j;
    }
    for (const auto& cell : layout.cells) {
        std::uint32_t bits = 0;
        for (std::size_t i = 0; i < cell.comparisons.size(); ++i) {
            const int c = pref.belief.compare(cell.comparisons[i].e, cell.comparisons[i].f);
            if (c == 0)
                throw GenericityViolation(-1, "belief ties " + format_event(cell.comparisons[i].e) + " and " + format_event(cell.comparisons[i].f));
            if (c > 0) bits |= std::uint32_t{1} << i;
        }
        t.patterns.push_back(bits);
    }
    return t;
}

bool SignatureView::supports(int voter, OutcomeId a, OutcomeId b) const {
    const int j = layout_.pair_index(a, b);
    if (j < 0) throw std::logic_error("outcome pair outside the signature layout");
    const bool first_above = (voters_[static_cast<std::size_t>(voter)]->orientation >> j) & 1U;
    return a == layout_.outcome_pairs[static_cast<std::size_t>(j)].first ? first_above : !first_above;
}

bool SignatureView::prefers(int voter, Event e, Event f) const {
    const VoterType& t = *voters_[static_cast<std::size_t>(voter)];
    for (std::size_t c = 0; c < layout_.cells.size(); ++c) {
        const auto& cell = layout_.cells[c];
        if (!(e | f).subset_of(cell.states)) continue;
        for (std::size_t i = 0; i < cell.comparisons.size(); ++i) {
            const auto& cmp = cell.comparisons[i];
            const bool bit = (t.patterns[c] >> i) & 1U;
            if (cmp.e == e && cmp.f == f) return bit;
            if (cmp.e == f && cmp.f == e) return !bit;
        }
    }
    throw std::logic_error("comparison outside the signature layout");
}

std::vector<Rational> difference_row(Event cell, Event e, Event f) {
    std::vector<Rational> row;
    cell.for_each([&](StateId s) { row.emplace_back((e.contains(s) ? 1 : 0) - (f.contains(s) ? 1 : 0)); });
    return row;
}

std::vector<std::vector<Rational>> pattern_rows(const SignatureLayout::CellLayout& cell, std::uint32_t pattern) {
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 0; i < cell.comparisons.size(); ++i) {
        const auto& c = cell.comparisons[i];
        rows.push_back(((pattern >> i) & 1U) ? difference_row(cell.states, c.e, c.f) : difference_row(cell.states, c.f, c.e));
    }
    return rows;
}

bool orientation_acyclic(const SignatureLayout& layout, std::uint32_t orientation) {
    const int nx = layout.num_outcomes;
    std::vector<std::vector<int>> above(static_cast<std::size_t>(nx));
    std::vector<int> indegree(static_cast<std::size_t>(nx), 0);
    for (std::size_t j = 0; j < layout.outcome_pairs.size(); ++j) {
        auto [x, y] = layout.outcome_pairs[j];
        if (!((orientation >> j) & 1U)) std::swap(x, y);
        above[static_cast<std::size_t>(x)].push_back(y);
        ++indegree[static_cast<std::size_t>(y)];
    }
    std::vector<int> ready;
    for (int x = 0; x < nx; ++x)
        if (indegree[static_cast<std::size_t>(x)] == 0) ready.push_back(x);
    int seen = 0;
    while (!ready.empty()) {
        const int x = ready.back();
        ready.pop_back();
        ++seen;
        for (int y : above[static_cast<std::size_t>(x)])
            if (--indegree[static_cast<std::size_t>(y)] == 0) ready.push_back(y);
    }
    return seen == nx;
}

TypeCatalog::TypeCatalog(const SignatureLayout& layout, int max_comparisons) : layout_(layout) {
    const int np = static_cast<int>(layout_.outcome_pairs.size());
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << np); ++mask)
        if (orientation_acyclic(layout_, mask)) orientations_.push_back(mask);

    for (const auto& cell : layout_.cells) {
        const int nc = static_cast<int>(cell.comparisons.size());
        if (nc > max_comparisons) throw std::length_error("too many comparisons in one cell");
        std::vector<std::uint32_t> pats;
        std::vector<std::vector<Rational>> pts;
        for (std::uint32_t pattern = 0; pattern < (std::uint32_t{1} << nc); ++pattern) {
            auto x = find_strict_point(cell.states.size(), pattern_rows(cell, pattern));
            if (!x) {
                ++unrealizable_;
                continue;
            }
            std::vector<Rational> full(static_cast<std::size_t>(layout_.num_states));
            std::size_t j = 0;
            cell.states.for_each([&](StateId s) { full[static_cast<std::size_t>(s)] = (*x)[j++]; });
            pats.push_back(pattern);
            pts.push_back(std::move(full));
        }
        patterns_.push_back(std::move(pats));
        points_.push_back(std::move(pts));
    }

    // orientation-major, then patterns with the first cell outermost; this
    // keeps types_ sorted so index_of can binary search
    for (std::uint32_t o : orientations_) {
        std::vector<std::size_t> slot(layout_.cells.size(), 0);
        for (;;) {
            VoterType t;
            t.orientation = o;
            for (std::size_t c = 0; c < slot.size(); ++c) t.patterns.push_back(patterns_[c][slot[c]]);
            types_.push_back(std::move(t));
            int c = static_cast<int>(slot.size()) - 1;
            for (; c >= 0; --c) {
                if (++slot[static_cast<std::size_t>(c)] < patterns_[static_cast<std::size_t>(c)].size()) break;
                slot[static_cast<std::size_t>(c)] = 0;
            }
            if (c < 0) break;
        }
    }
}

int TypeCatalog::index_of(const VoterType& t) const {
    auto it = std::lower_bound(types_.begin(), types_.end(), t);
    if (it != types_.end() && *it == t) return static_cast<int>(it - types_.begin());
    return -1;
}

const std::vector<Rational>& TypeCatalog::cell_point(int cell, std::uint32_t pattern) const {
    const auto& pats = patterns_.at(static_cast<std::size_t>(cell));
    auto it = std::lower_bound(pats.begin(), pats.end(), pattern);
    if (it == pats.end() || *it != pattern) throw std::invalid_argument("pattern is not realizable");
    return points_[static_cast<std::size_t>(cell)][static_cast<std::size_t>(it - pats.begin())];
}

Valuation TypeCatalog::valuation_for(std::uint32_t orientation) const {
    const int nx = layout_.num_outcomes;
    std::vector<std::vector<int>> above(static_cast<std::size_t>(nx));
    std::vector<int> indegree(static_cast<std::size_t>(nx), 0);
    for (std::size_t j = 0; j < layout_.outcome_pairs.size(); ++j) {
        auto [x, y] = layout_.outcome_pairs[j];
        if (!((orientation >> j) & 1U)) std::swap(x, y);
        above[static_cast<std::size_t>(x)].push_back(y);
        ++indegree[static_cast<std::size_t>(y)];
    }
    // Kahn's algorithm from the top, smallest id first
    std::vector<int> order;
    std::vector<bool> done(static_cast<std::size_t>(nx), false);
    while (static_cast<int>(order.size()) < nx) {
        int pick = -1;
        for (int x = 0; x < nx; ++x)
            if (!done[static_cast<std::size_t>(x)] && indegree[static_cast<std::size_t>(x)] == 0) { pick = x; break; }
        if (pick < 0) throw std::invalid_argument("cyclic orientation");
        done[static_cast<std::size_t>(pick)] = true;
        order.push_back(pick);
        for (int y : above[static_cast<std::size_t>(pick)]) --indegree[static_cast<std::size_t>(y)];
    }
    std::vector<Rational> values(static_cast<std::size_t>(nx));
    for (int pos = 0; pos < nx; ++pos) values[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] = Rational(nx - 1 - pos, nx - 1);
    return Valuation(std::move(values));
}

Preference TypeCatalog::realize(int i) const {
    const VoterType& t = type(i);
    std::vector<Rational> mass(static_cast<std::size_t>(layout_.num_states));
    const Rational weight(1, static_cast<long>(layout_.cells.size()));
    for (std::size_t c = 0; c < layout_.cells.size(); ++c) {
        const auto& point = cell_point(static_cast<int>(c), t.patterns[c]);
        layout_.cells[c].states.for_each([&](StateId s) { mass[static_cast<std::size_t>(s)] = weight * point[static_cast<std::size_t>(s)]; });
    }
    return Preference{valuation_for(t.orientation), Belief(std::move(mass))};
}

}  // namespace seuvote
