#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "group.hpp"
#include "rng.hpp"

namespace raag {

// Deterministic automaton whose paths from the start state are exactly the
// canonical normal forms. A state is the set of letters forbidden as the next
// letter: after appending y, a letter x stays forbidden iff it commutes past y
// (and was forbidden, or is smaller than y, or cancels y).
class GeodesicAutomaton {
public:
    static GeodesicAutomaton build(const GroupModel& G) {
        GeodesicAutomaton A;
        A.model_ = &G;
        A.num_letters_ = G.num_letters();
        std::unordered_map<uint64_t, int> index;
        auto intern = [&](uint64_t mask) {
            auto [it, fresh] = index.emplace(mask, (int)A.masks_.size());
            if (fresh) A.masks_.push_back(mask);
            return it->second;
        };
        intern(0);  // start: nothing forbidden
        for (size_t s = 0; s < A.masks_.size(); ++s) {
            uint64_t mask = A.masks_[s];
            for (int y = 0; y < A.num_letters_; ++y) {
                if (mask >> y & 1) {
                    A.trans_.push_back(-1);
                    continue;
                }
                uint64_t next = 1ull << (y ^ 1);
                for (int x = 0; x < A.num_letters_; ++x)
                    if (G.independent((char)x, (char)y) && ((mask >> x & 1) || x < y))
                        next |= 1ull << x;
                A.trans_.push_back(intern(next));
            }
        }
        return A;
    }

    const GroupModel& model() const { return *model_; }
    int state_count() const { return (int)masks_.size(); }
    int start() const { return 0; }

    // -1 when the letter is forbidden in this state.
    int next(int state, char letter) const {
        return trans_[(size_t)state * num_letters_ + (unsigned char)letter];
    }

    bool accepts_next(int state, char letter) const { return next(state, letter) >= 0; }

    // Walks a letter-code string from the start state; false if rejected.
    bool accepts(const std::string& code) const {
        int s = 0;
        for (char c : code) {
            s = next(s, c);
            if (s < 0) return false;
        }
        return true;
    }

    // Exact number of normal forms of each length 0..n (= sphere sizes #S(r)).
    std::vector<BigInt> sphere_counts(int n) const {
        std::vector<BigInt> out;
        std::vector<BigInt> cur(state_count(), 0);
        cur[0] = 1;
        out.push_back(1);
        for (int r = 1; r <= n; ++r) {
            std::vector<BigInt> nxt(state_count(), 0);
            for (int s = 0; s < state_count(); ++s) {
                if (cur[s] == 0) continue;
                for (int y = 0; y < num_letters_; ++y)
                    if (int t = next(s, (char)y); t >= 0) nxt[t] += cur[s];
            }
            BigInt total = 0;
            for (const BigInt& c : nxt) total += c;
            out.push_back(total);
            cur.swap(nxt);
        }
        return out;
    }

    BigInt sphere_count(int n) const { return sphere_counts(n).back(); }

    BigInt ball_count(int n) const {
        BigInt total = 0;
        for (const BigInt& c : sphere_counts(n)) total += c;
        return total;
    }

    // Number of accepted paths of each remaining length, per state. Row r
    // holds, for each state s, the number of normal-form suffixes of length r.
    std::vector<std::vector<BigInt>> path_count_table(int n) const {
        std::vector<std::vector<BigInt>> table(n + 1,
                                               std::vector<BigInt>(state_count(), 0));
        for (int s = 0; s < state_count(); ++s) table[0][s] = 1;
        for (int r = 1; r <= n; ++r)
            for (int s = 0; s < state_count(); ++s)
                for (int y = 0; y < num_letters_; ++y)
                    if (int t = next(s, (char)y); t >= 0) table[r][s] += table[r - 1][t];
        return table;
    }

    // All normal forms of length exactly n, in lexicographic order.
    std::vector<Element> sphere_elements(int n) const {
        std::vector<Element> out;
        std::string word;
        dfs_sphere(0, n, word, out);
        return out;
    }

private:
    void dfs_sphere(int state, int remaining, std::string& word,
                    std::vector<Element>& out) const {
        if (remaining == 0) {
            out.push_back(model_->from_code(word));
            return;
        }
        for (int y = 0; y < num_letters_; ++y) {
            int t = next(state, (char)y);
            if (t < 0) continue;
            word.push_back((char)y);
            dfs_sphere(t, remaining - 1, word, out);
            word.pop_back();
        }
    }

    const GroupModel* model_ = nullptr;
    int num_letters_ = 0;
    std::vector<uint64_t> masks_;
    std::vector<int> trans_;
};

// --- growth -------------------------------------------------------------

struct GrowthEstimate {
    std::vector<BigInt> sphere_sizes;   // index = radius
    std::vector<BigInt> ball_sizes;     // cumulative
    std::vector<double> sphere_ratios;  // #S(n)/#S(n-1), index n (0,1 unset)
    double lambda_hat = 1.0;            // exp(slope of log #B(n)), last half
    bool polynomial_flag = false;       // growth rate indistinguishable from 1
};

// lambda(G,S) estimate from exact ball sizes up to n_max (n_max >= 4).
inline GrowthEstimate growth_rate(const GeodesicAutomaton& A, int n_max) {
    if (n_max < 4) throw usage_error("growth_rate: n_max must be at least 4");
    GrowthEstimate est;
    est.sphere_sizes = A.sphere_counts(n_max);
    BigInt acc = 0;
    for (const BigInt& s : est.sphere_sizes) {
        acc += s;
        est.ball_sizes.push_back(acc);
    }
    est.sphere_ratios.assign(n_max + 1, 0.0);
    for (int n = 1; n <= n_max; ++n) {
        double prev = est.sphere_sizes[n - 1].convert_to<double>();
        if (prev > 0)
            est.sphere_ratios[n] = est.sphere_sizes[n].convert_to<double>() / prev;
    }
    // least-squares slope of log #B(n) over the last half of the range
    int lo = n_max / 2;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int n = lo; n <= n_max; ++n) {
        double y = std::log(est.ball_sizes[n].convert_to<double>());
        sx += n;
        sy += y;
        sxx += (double)n * n;
        sxy += n * y;
        ++cnt;
    }
    double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    est.lambda_hat = std::exp(slope);
    est.polynomial_flag = est.sphere_ratios[n_max] < 1.5;
    return est;
}

// --- exact uniform sampling ----------------------------------------------

// Samples `count` elements uniformly from the sphere of radius n by walking
// the automaton with probabilities proportional to downstream path counts.
// Draw i uses the derived stream (seed, i), so results are reproducible and
// independent of worker partitioning.
inline std::vector<Element> sample_sphere_uniform(const GeodesicAutomaton& A, int n, int count,
                                                  uint64_t seed) {
    if (A.sphere_count(n) == 0) throw usage_error("sample_sphere_uniform: empty sphere");
    auto table = A.path_count_table(n);
    const GroupModel& G = A.model();
    std::vector<Element> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        SplitMix64 rng = SplitMix64::stream(seed, (uint64_t)i);
        int state = A.start();
        std::string word;
        for (int r = n; r > 0; --r) {
            BigInt pick = rng.big_below(table[r][state]);
            for (int y = 0; y < G.num_letters(); ++y) {
                int t = A.next(state, (char)y);
                if (t < 0) continue;
                const BigInt& ways = table[r - 1][t];
                if (pick < ways) {
                    word.push_back((char)y);
                    state = t;
                    break;
                }
                pick -= ways;
            }
        }
        out.push_back(G.from_code(word));
    }
    return out;
}

}  // namespace raag
