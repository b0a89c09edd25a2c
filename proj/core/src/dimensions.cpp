#include "oneway/dimensions.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "oneway/errors.hpp"

namespace oneway {

namespace {

void require_boolean_total(const FunctionTable& f, const char* op) {
    f.validate();
    if (!f.is_boolean())
        throw validation_error(std::string(op) + ": table must be boolean (z_size == 2)");
    if (!f.is_total())
        throw validation_error(std::string(op) + ": table must be total");
}

// Distinct rows as column bitmasks; valid for y_size <= 64.
std::vector<std::uint64_t> distinct_row_masks(const FunctionTable& f) {
    std::set<std::uint64_t> rows;
    for (int x = 0; x < f.x_size; ++x) {
        std::uint64_t mask = 0;
        for (int y = 0; y < f.y_size; ++y)
            if (f.at(x, y) == 1) mask |= std::uint64_t{1} << y;
        rows.insert(mask);
    }
    return {rows.begin(), rows.end()};
}

bool masks_shatter(const std::vector<std::uint64_t>& rows, std::span<const int> cols) {
    const int s = static_cast<int>(cols.size());
    const std::size_t want = std::size_t{1} << s;
    std::vector<bool> seen(want, false);
    std::size_t found = 0;
    for (const std::uint64_t r : rows) {
        std::size_t pattern = 0;
        for (int t = 0; t < s; ++t)
            pattern |= ((r >> cols[t]) & 1u) << t;
        if (!seen[pattern]) {
            seen[pattern] = true;
            if (++found == want) return true;
        }
    }
    return false;
}

bool next_combination(std::vector<int>& c, int m) {
    const int s = static_cast<int>(c.size());
    int i = s - 1;
    while (i >= 0 && c[i] == m - s + i) --i;
    if (i < 0) return false;
    ++c[i];
    for (int j = i + 1; j < s; ++j) c[j] = c[j - 1] + 1;
    return true;
}

} // namespace

bool shatters(const FunctionTable& f, std::span<const int> columns) {
    require_boolean_total(f, "shatters");
    for (int c : columns)
        if (c < 0 || c >= f.y_size)
            throw validation_error("shatters: column " + std::to_string(c) + " out of range");
    if (columns.empty()) return true;
    if (f.y_size > 64)
        throw cap_error("shatters: y_size > 64 not supported by the bitmask search");
    return masks_shatter(distinct_row_masks(f), columns);
}

VcResult vc_dimension(const FunctionTable& f, const DimensionCaps& caps) {
    require_boolean_total(f, "vc_dimension");
    if (f.y_size > caps.max_columns || f.y_size > 64)
        throw cap_error("vc_dimension: exact search capped at y_size <= " +
                        std::to_string(std::min(caps.max_columns, 64)) + " (got " +
                        std::to_string(f.y_size) + ")");
    const auto rows = distinct_row_masks(f);
    VcResult result;
    // A shattered set of size s needs 2^s distinct rows.
    int row_bound = f.y_size;
    while (row_bound > 0 && (std::size_t{1} << row_bound) > rows.size()) --row_bound;
    const int max_s = std::min(caps.max_dim, row_bound);
    for (int s = 1; s <= max_s; ++s) {
        std::vector<int> cols(s);
        for (int i = 0; i < s; ++i) cols[i] = i;
        bool found = false;
        do {
            if (masks_shatter(rows, cols)) {
                result.dimension = s;
                result.witness.columns = cols;
                found = true;
                break;
            }
        } while (next_combination(cols, f.y_size));
        if (!found) break; // hereditary: no larger subset can shatter
    }
    if (result.dimension == caps.max_dim && caps.max_dim < row_bound)
        throw cap_error("vc_dimension: dimension reached the cap " +
                        std::to_string(caps.max_dim) + "; refusing to report a lower bound");
    return result;
}

std::uint64_t sauer_bound(int m, int d) {
    if (d < 0 || d > m)
        throw validation_error("sauer_bound: need 0 <= d <= m");
    std::uint64_t total = 1; // i = 0 term
    std::uint64_t c = 1;
    for (int i = 1; i <= d; ++i) {
        // c = C(m, i) updated incrementally; the product is computed before
        // the division so the intermediate must be checked.
        std::uint64_t num;
        if (__builtin_mul_overflow(c, static_cast<std::uint64_t>(m - i + 1), &num))
            throw cap_error("sauer_bound: 64-bit overflow at C(" + std::to_string(m) + "," +
                            std::to_string(i) + ")");
        c = num / static_cast<std::uint64_t>(i);
        if (__builtin_add_overflow(total, c, &total))
            throw cap_error("sauer_bound: 64-bit overflow in the partial sum");
    }
    return total;
}

namespace {

struct ColumnCandidates {
    // For each candidate threshold, bitmask words of High and Low rows.
    std::vector<double> thresholds;
    std::vector<std::vector<std::uint64_t>> high;
    std::vector<std::vector<std::uint64_t>> low;
};

std::vector<std::uint64_t> classify(const FunctionTable& f, int col, double w,
                                    double gamma, bool want_high) {
    const int words = (f.x_size + 63) / 64;
    std::vector<std::uint64_t> mask(words, 0);
    for (int x = 0; x < f.x_size; ++x) {
        const double v = f.scaled(x, col);
        const bool in = want_high ? (v > w + gamma) : (v < w - gamma);
        if (in) mask[x / 64] |= std::uint64_t{1} << (x % 64);
    }
    return mask;
}

ColumnCandidates column_candidates(const FunctionTable& f, int col, double gamma) {
    std::set<double> distinct;
    for (int x = 0; x < f.x_size; ++x) distinct.insert(f.scaled(x, col));
    std::vector<double> vals(distinct.begin(), distinct.end());
    ColumnCandidates out;
    std::set<double> seen;
    for (std::size_t a = 0; a < vals.size(); ++a) {
        for (std::size_t b = a + 1; b < vals.size(); ++b) {
            if (vals[b] - vals[a] <= 2.0 * gamma) continue;
            const double mid = 0.5 * (vals[a] + vals[b]);
            if (!seen.insert(mid).second) continue;
            out.thresholds.push_back(mid);
            out.high.push_back(classify(f, col, mid, gamma, true));
            out.low.push_back(classify(f, col, mid, gamma, false));
        }
    }
    return out;
}

// DFS over per-column threshold choices. pattern_masks[p] = rows realizing
// High/Low pattern p on the columns assigned so far; shattering fails as
// soon as any pattern empties.
bool assign_thresholds(const std::vector<const ColumnCandidates*>& cols, std::size_t level,
                       std::vector<std::vector<std::uint64_t>>& pattern_masks,
                       std::vector<double>& chosen) {
    if (level == cols.size()) return true;
    const auto& cand = *cols[level];
    const int words = static_cast<int>(pattern_masks[0].size());
    for (std::size_t t = 0; t < cand.thresholds.size(); ++t) {
        std::vector<std::vector<std::uint64_t>> next(pattern_masks.size() * 2,
                                                     std::vector<std::uint64_t>(words));
        bool alive = true;
        for (std::size_t p = 0; p < pattern_masks.size() && alive; ++p) {
            std::size_t lo_count = 0, hi_count = 0;
            for (int wd = 0; wd < words; ++wd) {
                const std::uint64_t lo = pattern_masks[p][wd] & cand.low[t][wd];
                const std::uint64_t hi = pattern_masks[p][wd] & cand.high[t][wd];
                next[p][wd] = lo;
                next[p + pattern_masks.size()][wd] = hi;
                lo_count += static_cast<std::size_t>(__builtin_popcountll(lo));
                hi_count += static_cast<std::size_t>(__builtin_popcountll(hi));
            }
            if (lo_count == 0 || hi_count == 0) alive = false;
        }
        if (!alive) continue;
        chosen[level] = cand.thresholds[t];
        if (assign_thresholds(cols, level + 1, next, chosen)) return true;
    }
    return false;
}

} // namespace

bool gamma_shattered(const FunctionTable& f, double gamma,
                     std::span<const int> columns,
                     std::span<const double> thresholds) {
    f.validate();
    if (!f.is_total())
        throw validation_error("gamma_shattered: table must be total");
    if (columns.size() != thresholds.size())
        throw validation_error("gamma_shattered: |thresholds| != |columns|");
    const int s = static_cast<int>(columns.size());
    if (s == 0) return true;
    const std::size_t want = std::size_t{1} << s;
    std::vector<bool> seen(want, false);
    std::size_t found = 0;
    for (int x = 0; x < f.x_size; ++x) {
        std::size_t pattern = 0;
        bool usable = true;
        for (int t = 0; t < s && usable; ++t) {
            const double v = f.scaled(x, columns[t]);
            if (v > thresholds[t] + gamma) pattern |= std::size_t{1} << t;
            else if (!(v < thresholds[t] - gamma)) usable = false;
        }
        if (usable && !seen[pattern]) {
            seen[pattern] = true;
            if (++found == want) return true;
        }
    }
    return false;
}

PdimResult pseudo_dimension(const FunctionTable& f, double gamma,
                            const DimensionCaps& caps) {
    f.validate();
    if (!f.is_total())
        throw validation_error("pseudo_dimension: table must be total");
    if (!(gamma > 0.0))
        throw validation_error("pseudo_dimension: gamma must be positive");
    if (f.y_size > caps.max_columns)
        throw cap_error("pseudo_dimension: exact search capped at y_size <= " +
                        std::to_string(caps.max_columns));

    std::vector<ColumnCandidates> cands(f.y_size);
    std::vector<int> usable;
    for (int y = 0; y < f.y_size; ++y) {
        cands[y] = column_candidates(f, y, gamma);
        if (!cands[y].thresholds.empty()) usable.push_back(y);
    }

    PdimResult result;
    const int words = (f.x_size + 63) / 64;
    std::vector<std::uint64_t> all_rows(words, 0);
    for (int x = 0; x < f.x_size; ++x)
        all_rows[x / 64] |= std::uint64_t{1} << (x % 64);

    // A gamma-shattered set of size s needs 2^s rows.
    int row_bound = static_cast<int>(usable.size());
    while (row_bound > 0 &&
           (std::size_t{1} << row_bound) > static_cast<std::size_t>(f.x_size))
        --row_bound;
    const int max_s = std::min(caps.max_dim, row_bound);
    for (int s = 1; s <= max_s; ++s) {
        std::vector<int> pick(s);
        for (int i = 0; i < s; ++i) pick[i] = i;
        bool found = false;
        do {
            std::vector<const ColumnCandidates*> cols(s);
            for (int i = 0; i < s; ++i) cols[i] = &cands[usable[pick[i]]];
            std::vector<std::vector<std::uint64_t>> root{all_rows};
            std::vector<double> chosen(s);
            if (assign_thresholds(cols, 0, root, chosen)) {
                result.dimension = s;
                result.witness.columns.clear();
                for (int i = 0; i < s; ++i)
                    result.witness.columns.push_back(usable[pick[i]]);
                result.witness.thresholds = chosen;
                found = true;
                break;
            }
        } while (next_combination(pick, static_cast<int>(usable.size())));
        if (!found) break; // hereditary in s, same as the VC search
    }
    if (result.dimension == caps.max_dim && caps.max_dim < row_bound)
        throw cap_error("pseudo_dimension: dimension reached the cap " +
                        std::to_string(caps.max_dim));
    return result;
}

} // namespace oneway
