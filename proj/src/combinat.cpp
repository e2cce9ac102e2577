#include "forge/combinat.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace forge {

bool BasedInjection::operator<(const BasedInjection& o) const {
    if (m != o.m) return m < o.m;
    if (n != o.n) return n < o.n;
    return map < o.map;
}

bool BasedMap::operator<(const BasedMap& o) const {
    if (m != o.m) return m < o.m;
    if (n != o.n) return n < o.n;
    return map < o.map;
}

BasedInjection identity_perm(int n) {
    BasedInjection p{n, n, std::vector<int>(n)};
    std::iota(p.map.begin(), p.map.end(), 1);
    return p;
}

BasedInjection make_injection(int m, int n, std::vector<int> map) {
    if (static_cast<int>(map.size()) != m) throw std::invalid_argument("injection: table size != m");
    if (m > n) throw std::invalid_argument("injection: m > n");
    std::vector<char> seen(n + 1, 0);
    for (int v : map) {
        if (v < 1 || v > n) throw std::invalid_argument("injection: value out of range");
        if (seen[v]) throw std::invalid_argument("injection: not injective");
        seen[v] = 1;
    }
    return BasedInjection{m, n, std::move(map)};
}

BasedInjection compose(const BasedInjection& g, const BasedInjection& f) {
    if (f.n != g.m) throw std::invalid_argument("compose: level mismatch");
    BasedInjection out{f.m, g.n, std::vector<int>(f.m)};
    for (int i = 1; i <= f.m; ++i) out.map[i - 1] = g(f(i));
    return out;
}

BasedInjection invert_perm(const BasedInjection& p) {
    if (!p.is_permutation()) throw std::invalid_argument("invert: not a permutation");
    BasedInjection out{p.n, p.n, std::vector<int>(p.n)};
    for (int i = 1; i <= p.n; ++i) out.map[p(i) - 1] = i;
    return out;
}

BasedMap make_based_map(int m, int n, std::vector<int> map, MapClass cls) {
    if (static_cast<int>(map.size()) != m) throw std::invalid_argument("based map: table size != m");
    for (int v : map) {
        if (v < 0 || v > n) throw std::invalid_argument("based map: value out of range");
        if (cls == MapClass::PS && v == 0)
            throw std::invalid_argument("based map: PS requires phi^-1(0) = {0}");
    }
    return BasedMap{m, n, std::move(map), cls};
}

BasedMap compose(const BasedMap& g, const BasedMap& f) {
    if (f.n != g.m) throw std::invalid_argument("compose: level mismatch");
    BasedMap out{f.m, g.n, std::vector<int>(f.m),
                 (f.cls == MapClass::PS && g.cls == MapClass::PS) ? MapClass::PS : MapClass::F};
    for (int i = 1; i <= f.m; ++i) out.map[i - 1] = g(f(i));
    return out;
}

BasedInjection skip_injection(int i, int n) {
    if (i < 1 || i > n) throw std::invalid_argument("skip_injection: bad index");
    BasedInjection out{n - 1, n, std::vector<int>(n - 1)};
    for (int a = 1; a <= n - 1; ++a) out.map[a - 1] = a < i ? a : a + 1;
    return out;
}

BasedInjection adjacent_transposition(int i, int n) {
    if (i < 1 || i >= n) throw std::invalid_argument("adjacent_transposition: bad index");
    BasedInjection p = identity_perm(n);
    std::swap(p.map[i - 1], p.map[i]);
    return p;
}

std::vector<int> adjacent_word(const BasedInjection& sigma) {
    if (!sigma.is_permutation()) throw std::invalid_argument("adjacent_word: not a permutation");
    // bubble sort sigma to the identity; the swaps, reversed, rebuild sigma
    std::vector<int> v = sigma.map;
    std::vector<int> word;
    bool moved = true;
    while (moved) {
        moved = false;
        for (int i = 0; i + 1 < static_cast<int>(v.size()); ++i) {
            if (v[i] > v[i + 1]) {
                std::swap(v[i], v[i + 1]);
                word.push_back(i + 1);
                moved = true;
            }
        }
    }
    std::reverse(word.begin(), word.end());
    return word;
}

BasedInjection block_sum(const BasedInjection& f, const BasedInjection& g) {
    BasedInjection out{f.m + g.m, f.n + g.n, std::vector<int>(f.m + g.m)};
    for (int i = 1; i <= f.m; ++i) out.map[i - 1] = f(i);
    for (int i = 1; i <= g.m; ++i) out.map[f.m + i - 1] = f.n + g(i);
    return out;
}

BasedInjection block_permutation(const BasedInjection& tau, const std::vector<int>& blocks) {
    if (!tau.is_permutation() || tau.n != static_cast<int>(blocks.size()))
        throw std::invalid_argument("block_permutation: bad inputs");
    int k = tau.n;
    int n = std::accumulate(blocks.begin(), blocks.end(), 0);
    // target position p holds block tau^{-1}(p)
    BasedInjection inv = invert_perm(tau);
    std::vector<int> tgt_offset(k + 1, 0);
    for (int p = 1; p <= k; ++p) tgt_offset[p] = tgt_offset[p - 1] + blocks[inv(p) - 1];
    std::vector<int> src_offset(k + 1, 0);
    for (int i = 1; i <= k; ++i) src_offset[i] = src_offset[i - 1] + blocks[i - 1];

    BasedInjection out{n, n, std::vector<int>(n)};
    for (int i = 1; i <= k; ++i) {
        int p = tau(i);
        for (int r = 1; r <= blocks[i - 1]; ++r)
            out.map[src_offset[i - 1] + r - 1] = tgt_offset[p - 1] + r;
    }
    return out;
}

ShuffleSplit shuffle_factorize(const BasedInjection& sigma, int p, int q) {
    if (sigma.n != p + q) throw std::invalid_argument("shuffle_factorize: bad block split");
    MultiShuffleSplit ms = multi_shuffle_factorize(sigma, {p, q});
    return ShuffleSplit{ms.delta, ms.parts[0], ms.parts[1]};
}

MultiShuffleSplit multi_shuffle_factorize(const BasedInjection& lambda, const std::vector<int>& blocks) {
    int total = std::accumulate(blocks.begin(), blocks.end(), 0);
    if (lambda.n != total) throw std::invalid_argument("multi_shuffle_factorize: bad block split");
    int k = static_cast<int>(blocks.size());
    std::vector<int> offset(k + 1, 0);
    for (int t = 1; t <= k; ++t) offset[t] = offset[t - 1] + blocks[t - 1];

    std::vector<std::vector<int>> sources(k);  // sources landing in block t, increasing
    for (int a = 1; a <= lambda.m; ++a) {
        int v = lambda(a);
        int t = 0;
        while (v > offset[t + 1]) ++t;
        sources[t].push_back(a);
    }

    MultiShuffleSplit out;
    out.parts.reserve(k);
    std::vector<int> delta_map;
    delta_map.reserve(lambda.m);
    for (int t = 0; t < k; ++t) {
        std::vector<int> part(sources[t].size());
        for (size_t r = 0; r < sources[t].size(); ++r) {
            part[r] = lambda(sources[t][r]) - offset[t];
            delta_map.push_back(sources[t][r]);
        }
        int sz = static_cast<int>(part.size());
        out.parts.push_back(make_injection(sz, blocks[t], std::move(part)));
    }
    out.delta = make_injection(lambda.m, lambda.m, std::move(delta_map));
    return out;
}

BasedInjection complete_to_perm(const BasedInjection& lambda) {
    std::vector<char> used(lambda.n + 1, 0);
    for (int a = 1; a <= lambda.m; ++a) used[lambda(a)] = 1;
    std::vector<int> map = lambda.map;
    for (int v = 1; v <= lambda.n; ++v)
        if (!used[v]) map.push_back(v);
    return make_injection(lambda.n, lambda.n, std::move(map));
}

bool is_shuffle(const BasedInjection& p, int j, int k) {
    return is_multishuffle(p, {j, k});
}

bool is_multishuffle(const BasedInjection& p, const std::vector<int>& blocks) {
    if (!p.is_permutation()) return false;
    if (std::accumulate(blocks.begin(), blocks.end(), 0) != p.n) return false;
    int pos = 1;
    for (int b : blocks) {
        for (int r = 1; r < b; ++r)
            if (p(pos + r - 1) > p(pos + r)) return false;
        pos += b;
    }
    return true;
}

std::vector<BasedInjection> enumerate_permutations(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 1);
    std::vector<BasedInjection> out;
    do {
        out.push_back(BasedInjection{n, n, v});
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
}

std::vector<BasedInjection> enumerate_injections(int m, int n) {
    std::vector<BasedInjection> out;
    if (m > n) return out;
    std::vector<int> cur;
    std::vector<char> used(n + 1, 0);
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == m) {
            out.push_back(BasedInjection{m, n, cur});
            return;
        }
        for (int v = 1; v <= n; ++v) {
            if (used[v]) continue;
            used[v] = 1;
            cur.push_back(v);
            self(self);
            cur.pop_back();
            used[v] = 0;
        }
    };
    rec(rec);
    return out;
}

std::vector<BasedMap> enumerate_based_maps(int m, int n, MapClass cls) {
    std::vector<BasedMap> out;
    int lo = cls == MapClass::PS ? 1 : 0;
    if (cls == MapClass::PS && m > 0 && n == 0) return out;
    std::vector<int> cur(m, lo);
    for (;;) {
        out.push_back(BasedMap{m, n, cur, cls});
        int i = m - 1;
        while (i >= 0 && cur[i] == n) cur[i--] = lo;
        if (i < 0) break;
        ++cur[i];
    }
    if (m == 0 && out.empty()) out.push_back(BasedMap{0, n, {}, cls});
    return out;
}

std::vector<BasedInjection> enumerate_shuffles(int j, int k) {
    return enumerate_multishuffles({j, k});
}

std::vector<BasedInjection> enumerate_multishuffles(const std::vector<int>& blocks) {
    int n = std::accumulate(blocks.begin(), blocks.end(), 0);
    std::vector<BasedInjection> out;
    for (auto& p : enumerate_permutations(n))
        if (is_multishuffle(p, blocks)) out.push_back(p);
    return out;
}

long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

std::string inj_key(const BasedInjection& f) {
    std::string out = std::to_string(f.m) + ">" + std::to_string(f.n) + ":";
    for (int i = 0; i < f.m; ++i) {
        if (i) out += '.';
        out += std::to_string(f.map[i]);
    }
    return out;
}

std::string map_key(const BasedMap& f) {
    std::string out = std::to_string(f.m) + "@" + std::to_string(f.n) + ":";
    for (int i = 0; i < f.m; ++i) {
        if (i) out += '.';
        out += std::to_string(f.map[i]);
    }
    return out;
}

BasedInjection inj_from_key(const std::string& key) {
    size_t gt = key.find('>');
    size_t col = key.find(':');
    if (gt == std::string::npos || col == std::string::npos || col < gt)
        throw std::invalid_argument("bad injection key '" + key + "'");
    int m = std::stoi(key.substr(0, gt));
    int n = std::stoi(key.substr(gt + 1, col - gt - 1));
    std::vector<int> map;
    size_t pos = col + 1;
    while (pos < key.size()) {
        size_t dot = key.find('.', pos);
        if (dot == std::string::npos) dot = key.size();
        map.push_back(std::stoi(key.substr(pos, dot - pos)));
        pos = dot + 1;
    }
    return make_injection(m, n, std::move(map));
}

}  // namespace forge
