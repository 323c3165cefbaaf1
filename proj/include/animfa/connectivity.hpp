#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "animfa/core.hpp"

namespace animfa {

/// Strongly connected components of the directed graph with an edge i -> j
/// wherever entry (i, j) is nonzero. Iterative Tarjan; component ids are
/// assigned in reverse topological order.
template <class T>
std::vector<std::size_t> strong_components(const SquareMatrix<T>& a, std::size_t* count = nullptr)
{
    const std::size_t n = a.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::pair<std::size_t, std::size_t>> call; // (node, next neighbour)
    std::size_t next_index = 0, next_comp = 0;

    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited)
            continue;
        call.emplace_back(root, 0);
        index[root] = low[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!call.empty()) {
            auto& [v, k] = call.back();
            if (k < n) {
                const std::size_t w = k++;
                if (w == v || a(v, w) == T{})
                    continue;
                if (index[w] == unvisited) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            const std::size_t done = v;
            call.pop_back();
            if (!call.empty())
                low[call.back().first] = std::min(low[call.back().first], low[done]);
            if (low[done] == index[done]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = next_comp;
                } while (w != done);
                ++next_comp;
            }
        }
    }
    if (count)
        *count = next_comp;
    return comp;
}

/// True iff the directed support of `a` (diagonal ignored) is strongly
/// connected, i.e. a nonnegative matrix with this pattern is irreducible.
/// A single node counts as connected.
template <class T>
bool is_strongly_connected(const SquareMatrix<T>& a)
{
    if (a.size() <= 1)
        return true;
    std::size_t count = 0;
    strong_components(a, &count);
    return count == 1;
}

} // namespace animfa
