#pragma once

#include <functional>
#include <vector>

#include "uli/error.hpp"
#include "uli/rational.hpp"

namespace uli {

/// All n in N^parts with sum total, lexicographically descending.
inline std::vector<std::vector<int>> compositions(int total, int parts)
{
    require(parts >= 1 && total >= 0, ErrorKind::InvalidArgument, "compositions need parts >= 1 and total >= 0");
    std::vector<std::vector<int>> out;
    std::vector<int> current(static_cast<std::size_t>(parts), 0);
    std::function<void(int, int)> fill = [&](int index, int left) {
        if (index == parts - 1) {
            current[static_cast<std::size_t>(index)] = left;
            out.push_back(current);
            return;
        }
        for (int v = left; v >= 0; --v) {
            current[static_cast<std::size_t>(index)] = v;
            fill(index + 1, left - v);
        }
    };
    fill(0, total);
    return out;
}

/// (n_1 + ... + n_k)! / (n_1! ... n_k!)
inline Integer multinomial(const std::vector<int>& counts)
{
    Integer result = 1;
    int running = 0;
    for (int c : counts) {
        for (int i = 1; i <= c; ++i) {
            ++running;
            result *= running;
            result /= i;
        }
    }
    return result;
}

/// Visits every multiset of size k drawn from {0..t-1}, as the per-element
/// counts, in lexicographically descending order of the count vector.
inline void for_each_multiset(int t, int k, const std::function<void(const std::vector<int>&)>& visit)
{
    for (const auto& counts : compositions(k, t))
        visit(counts);
}

} // namespace uli
