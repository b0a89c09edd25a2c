#include "oneway/function_table.hpp"

#include <map>
#include <string>

#include "oneway/errors.hpp"

namespace oneway {

bool FunctionTable::is_total() const {
    for (int v : values)
        if (v == kStar) return false;
    return true;
}

void FunctionTable::validate() const {
    if (x_size < 1 || y_size < 1)
        throw validation_error("function table: x_size and y_size must be >= 1 (got " +
                               std::to_string(x_size) + " x " + std::to_string(y_size) + ")");
    if (z_size < 2)
        throw validation_error("function table: z_size must be >= 2 (got " +
                               std::to_string(z_size) + ")");
    if (values.size() != static_cast<std::size_t>(x_size) * static_cast<std::size_t>(y_size))
        throw validation_error("function table: values has " + std::to_string(values.size()) +
                               " cells, expected " + std::to_string(x_size) + "*" +
                               std::to_string(y_size));
    for (int x = 0; x < x_size; ++x) {
        for (int y = 0; y < y_size; ++y) {
            const int v = at(x, y);
            if (v == kStar) {
                if (!partial)
                    throw validation_error("function table: values[" + std::to_string(x) + "][" +
                                           std::to_string(y) + "] is -1 (undefined) but partial=false");
            } else if (v < 0 || v >= z_size) {
                throw validation_error("function table: values[" + std::to_string(x) + "][" +
                                       std::to_string(y) + "] = " + std::to_string(v) +
                                       " out of range [0," + std::to_string(z_size - 1) + "]");
            }
        }
    }
}

int distinct_row_count(const FunctionTable& f) {
    std::map<std::vector<int>, int> seen;
    std::vector<int> row(f.y_size);
    for (int x = 0; x < f.x_size; ++x) {
        for (int y = 0; y < f.y_size; ++y) row[y] = f.at(x, y);
        seen.emplace(row, x);
    }
    return static_cast<int>(seen.size());
}

bool is_trivial(const FunctionTable& f) {
    return distinct_row_count(f) == 1;
}

} // namespace oneway
