#pragma once

#include <string>
#include <vector>

namespace oneway {

/// A finite (possibly partial, possibly non-boolean) function
/// f : X x Y -> {0,...,k-1} u {undefined} stored as a dense row-major matrix.
/// The undefined marker is kStar (-1) and is legal only when partial is true.
struct FunctionTable {
    static constexpr int kStar = -1;

    int x_size = 0;
    int y_size = 0;
    int z_size = 2;
    bool partial = false;
    std::vector<int> values; // x_size * y_size, row-major

    FunctionTable() = default;
    FunctionTable(int xs, int ys, int zs, bool is_partial = false)
        : x_size(xs), y_size(ys), z_size(zs), partial(is_partial),
          values(static_cast<std::size_t>(xs) * static_cast<std::size_t>(ys), 0) {}

    int at(int x, int y) const {
        return values[static_cast<std::size_t>(x) * y_size + y];
    }
    int& at(int x, int y) {
        return values[static_cast<std::size_t>(x) * y_size + y];
    }

    bool is_boolean() const { return z_size == 2; }
    bool is_total() const;

    /// Scaled value (v+1)/k in (0,1]; the table's outputs viewed in the unit
    /// interval for pseudo-dimension and L1-loss purposes. Undefined cells
    /// are rejected by callers before scaling.
    double scaled(int x, int y) const {
        return static_cast<double>(at(x, y) + 1) / static_cast<double>(z_size);
    }

    /// Throws validation_error naming the offending cell on any invariant
    /// violation (range, stray star, degenerate sizes).
    void validate() const;
};

/// Number of distinct rows of the table (each row f_x as a vector over Y).
int distinct_row_count(const FunctionTable& f);

/// True when the value is determined by y alone (a single distinct row).
bool is_trivial(const FunctionTable& f);

} // namespace oneway
