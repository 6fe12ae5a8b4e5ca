#pragma once

// Test-only brute-force oracles, independent of the normal-form engine in
// raag/group.hpp. They work on raw letter-code strings and apply the two
// rewriting moves (swap adjacent commuting letters, cancel adjacent inverse
// pair) to a fixpoint set. Only usable for short words.

#include <queue>
#include <set>
#include <string>

#include <raag/group.hpp>

namespace raag::oracle {

// All words reachable from w by the two rewriting moves.
inline std::set<std::string> rewriting_closure(const GroupModel& G, const std::string& w) {
    std::set<std::string> seen{w};
    std::queue<std::string> todo;
    todo.push(w);
    while (!todo.empty()) {
        std::string cur = todo.front();
        todo.pop();
        for (size_t i = 0; i + 1 < cur.size(); ++i) {
            char x = cur[i], y = cur[i + 1];
            if (y == (char)(x ^ 1)) {
                std::string next = cur.substr(0, i) + cur.substr(i + 2);
                if (seen.insert(next).second) todo.push(next);
            }
            if (G.independent(x, y)) {
                std::string next = cur;
                std::swap(next[i], next[i + 1]);
                if (seen.insert(next).second) todo.push(next);
            }
        }
    }
    return seen;
}

// ShortLex-least word in the closure: minimal length, then lexicographically
// least (letter codes sort in letter order by construction).
inline std::string normal_form(const GroupModel& G, const Word& w) {
    std::string raw;
    for (Letter l : w) raw.push_back(G.encode(l));
    std::string best = raw;
    for (const std::string& c : rewriting_closure(G, raw))
        if (c.size() < best.size() || (c.size() == best.size() && c < best)) best = c;
    return best;
}

}  // namespace raag::oracle
