#include "marcopolo/graph_analysis.hpp"

#include <algorithm>
#include <functional>

namespace marcopolo {

std::vector<std::vector<char>> transition_graph(const Dmdp& m) {
    std::vector<std::vector<char>> adj(m.num_states(), std::vector<char>(m.num_states(), 0));
    for (State s = 0; s < m.num_states(); ++s)
        for (Action a = 0; a < m.num_actions(); ++a)
            adj[s][m.step(s, a)] = 1;
    return adj;
}

namespace {

// Iterative Tarjan; returns component id per state, ids in reverse
// topological order of the condensation (0 = last finished).
std::vector<int> strongly_connected_components(const std::vector<std::vector<char>>& adj,
                                               int& num_components) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), lowlink(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    int next_index = 0;
    num_components = 0;

    struct Frame {
        int v;
        int next_child;
    };
    for (int root = 0; root < n; ++root) {
        if (index[root] >= 0)
            continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            int advanced = -1;
            while (f.next_child < n) {
                const int w = f.next_child++;
                if (!adj[f.v][w])
                    continue;
                if (index[w] < 0) {
                    advanced = w;
                    break;
                }
                if (on_stack[w])
                    lowlink[f.v] = std::min(lowlink[f.v], index[w]);
            }
            if (advanced >= 0) {
                index[advanced] = lowlink[advanced] = next_index++;
                stack.push_back(advanced);
                on_stack[advanced] = 1;
                frames.push_back(Frame{advanced, 0});
                continue;
            }
            if (lowlink[f.v] == index[f.v]) {
                while (true) {
                    const int w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = num_components;
                    if (w == f.v)
                        break;
                }
                ++num_components;
            }
            const int v = f.v;
            frames.pop_back();
            if (!frames.empty())
                lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
        }
    }
    return comp;
}

} // namespace

ClosedSetResult closed_communicating_set(const Dmdp& m) {
    const auto adj = transition_graph(m);
    const int n = m.num_states();
    int num_comp = 0;
    const auto comp = strongly_connected_components(adj, num_comp);

    std::vector<char> has_out_edge(num_comp, 0);
    std::vector<int> comp_size(num_comp, 0);
    std::vector<char> comp_self_loop(num_comp, 0);
    for (State s = 0; s < n; ++s) {
        ++comp_size[comp[s]];
        for (State t = 0; t < n; ++t) {
            if (!adj[s][t])
                continue;
            if (comp[s] != comp[t])
                has_out_edge[comp[s]] = 1;
            else if (s == t)
                comp_self_loop[comp[s]] = 1;
        }
    }

    int terminal = -1;
    int terminal_count = 0;
    for (int c = 0; c < num_comp; ++c) {
        if (!has_out_edge[c]) {
            terminal = c;
            ++terminal_count;
        }
    }

    ClosedSetResult result;
    if (terminal_count != 1)
        return result; // two or more absorbing components: not weakly communicating

    // Removed states must be transient under every policy, i.e. the part
    // outside the terminal component must be cycle-free.
    for (int c = 0; c < num_comp; ++c) {
        if (c == terminal)
            continue;
        if (comp_size[c] > 1 || comp_self_loop[c])
            return result;
    }

    result.weakly_communicating = true;
    for (State s = 0; s < n; ++s) {
        if (comp[s] == terminal)
            result.closed.push_back(s);
        else
            result.transient.push_back(s);
    }
    return result;
}

bool is_unichain(const Dmdp& m) {
    if (m.num_states() > 12)
        throw InputError("is_unichain: exhaustive analyzer supports at most 12 states");
    const auto adj = transition_graph(m);
    const int n = m.num_states();

    // Enumerate simple cycles as vertex bitmasks, rooted at their minimal
    // vertex so each cycle appears once. A fresh mask disjoint from any
    // earlier one settles the question immediately.
    constexpr std::size_t kCycleCap = 200000;
    std::vector<std::uint32_t> masks;
    bool disjoint_pair = false;
    std::uint32_t on_path = 0;

    std::function<void(int, int)> dfs = [&](int start, int v) {
        if (disjoint_pair)
            return;
        on_path |= 1u << v;
        for (int w = 0; w < n && !disjoint_pair; ++w) {
            if (!adj[v][w])
                continue;
            if (w == start) {
                for (std::uint32_t prior : masks) {
                    if ((prior & on_path) == 0) {
                        disjoint_pair = true;
                        break;
                    }
                }
                if (!disjoint_pair) {
                    if (masks.size() >= kCycleCap)
                        throw InputError("is_unichain: cycle enumeration cap exceeded");
                    masks.push_back(on_path);
                }
            } else if (w > start && !(on_path & (1u << w))) {
                dfs(start, w);
            }
        }
        on_path &= ~(1u << v);
    };

    for (int start = 0; start < n && !disjoint_pair; ++start)
        dfs(start, start);
    return !disjoint_pair;
}

std::optional<int> minimal_uniform_path_length(const Dmdp& m, const std::vector<State>& closed) {
    for (State s : closed)
        m.check_state(s);
    if (closed.empty())
        throw InputError("minimal_uniform_path_length: empty closed set");
    if (closed.size() == 1)
        return 1; // no ordered pairs to join; the condition holds vacuously

    const int n = m.num_states();
    const auto adj = transition_graph(m);
    std::vector<char> in_closed(n, 0);
    for (State s : closed)
        in_closed[s] = 1;

    const std::int64_t c = static_cast<std::int64_t>(closed.size());
    const std::int64_t cap = (c - 1) * (c - 1) + 1; // Wielandt primitivity bound

    // reach[s][t] = exists a walk of length exactly d from s to t.
    std::vector<std::vector<char>> reach = adj;
    for (std::int64_t d = 1; d <= cap; ++d) {
        if (d > 1) {
            std::vector<std::vector<char>> next(n, std::vector<char>(n, 0));
            for (int s = 0; s < n; ++s)
                for (int mid = 0; mid < n; ++mid)
                    if (reach[s][mid])
                        for (int t = 0; t < n; ++t)
                            if (adj[mid][t])
                                next[s][t] = 1;
            reach = std::move(next);
        }
        bool all = true;
        for (State s : closed) {
            for (State t : closed) {
                if (s != t && !reach[s][t]) {
                    all = false;
                    break;
                }
            }
            if (!all)
                break;
        }
        if (all)
            return static_cast<int>(d);
    }
    return std::nullopt;
}

std::optional<std::vector<Action>> fixed_length_path(const Dmdp& m, State from, State to,
                                                     std::int64_t len) {
    m.check_state(from);
    m.check_state(to);
    if (len < 0)
        throw InputError("fixed_length_path: negative length");
    if (len == 0) {
        if (from == to)
            return std::vector<Action>{};
        return std::nullopt;
    }

    // feasible[j][s]: s can reach `to` in exactly j steps.
    const int n = m.num_states();
    std::vector<std::vector<char>> feasible(static_cast<std::size_t>(len) + 1,
                                            std::vector<char>(n, 0));
    feasible[0][to] = 1;
    for (std::int64_t j = 1; j <= len; ++j)
        for (State s = 0; s < n; ++s)
            for (Action a = 0; a < m.num_actions(); ++a)
                if (feasible[j - 1][m.step(s, a)]) {
                    feasible[j][s] = 1;
                    break;
                }
    if (!feasible[len][from])
        return std::nullopt;

    std::vector<Action> seq;
    seq.reserve(static_cast<std::size_t>(len));
    State s = from;
    for (std::int64_t remaining = len; remaining >= 1; --remaining) {
        for (Action a = 0; a < m.num_actions(); ++a) {
            if (feasible[remaining - 1][m.step(s, a)]) {
                seq.push_back(a);
                s = m.step(s, a);
                break;
            }
        }
    }
    return seq;
}

StructureReport analyze_structure(const Dmdp& m) {
    StructureReport report;
    auto closed = closed_communicating_set(m);
    report.weakly_communicating = closed.weakly_communicating;
    report.closed = closed.closed;
    report.transient = closed.transient;
    if (m.num_states() <= 12)
        report.unichain = is_unichain(m);
    if (closed.weakly_communicating)
        report.assumption1_d = minimal_uniform_path_length(m, closed.closed);
    return report;
}

} // namespace marcopolo
