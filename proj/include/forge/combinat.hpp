#pragma once

#include <string>
#include <vector>

namespace forge {

/// A based injection in Lambda: sources 1..m map to distinct targets in 1..n
/// (0 -> 0 implicit). Permutations are the case m == n.
struct BasedInjection {
    int m = 0;
    int n = 0;
    std::vector<int> map;  // map[i-1] = image of i, values in 1..n

    bool is_permutation() const { return m == n; }
    int operator()(int i) const { return map[i - 1]; }
    bool operator==(const BasedInjection& o) const = default;
    bool operator<(const BasedInjection& o) const;
};

enum class MapClass { PS, F };

/// A based map m -> n (class F), or one with phi^{-1}(0) = {0} (class PS).
struct BasedMap {
    int m = 0;
    int n = 0;
    std::vector<int> map;  // values in 0..n (PS: 1..n)
    MapClass cls = MapClass::F;

    int operator()(int i) const { return i == 0 ? 0 : map[i - 1]; }
    bool operator==(const BasedMap& o) const { return m == o.m && n == o.n && map == o.map; }
    bool operator<(const BasedMap& o) const;
};

BasedInjection identity_perm(int n);
BasedInjection make_injection(int m, int n, std::vector<int> map);
BasedInjection compose(const BasedInjection& g, const BasedInjection& f);
BasedInjection invert_perm(const BasedInjection& p);
BasedMap make_based_map(int m, int n, std::vector<int> map, MapClass cls);
BasedMap compose(const BasedMap& g, const BasedMap& f);

/// sigma_i : n-1 -> n, the ordered injection that skips i in the target (1 <= i <= n).
BasedInjection skip_injection(int i, int n);

/// adjacent transposition s_i = (i i+1) in Sigma_n, 1 <= i <= n-1
BasedInjection adjacent_transposition(int i, int n);

/// Writes sigma as s[w_0] o s[w_1] o ... o s[w_last] (empty for the identity).
std::vector<int> adjacent_word(const BasedInjection& sigma);

/// f on the first block, g on the second: Lambda(j+k, p+q).
BasedInjection block_sum(const BasedInjection& f, const BasedInjection& g);

/// The permutation of j_1+...+j_k letters moving block i to position tau(i),
/// preserving internal order.
BasedInjection block_permutation(const BasedInjection& tau, const std::vector<int>& blocks);

struct ShuffleSplit {
    BasedInjection alpha;   // (j,k)-shuffle in Sigma_n
    BasedInjection sigma1;  // Lambda(j,p)
    BasedInjection sigma2;  // Lambda(k,q)
};

/// Factors sigma in Lambda(n, p+q) as (sigma1 v sigma2) o alpha^-1 with alpha
/// the unique (j,k)-shuffle, j = #preimages of the first block.
ShuffleSplit shuffle_factorize(const BasedInjection& sigma, int p, int q);

struct MultiShuffleSplit {
    BasedInjection delta;               // multishuffle in Sigma_n
    std::vector<BasedInjection> parts;  // part t in Lambda(j'_t, blocks[t])
};

/// The k-block generalization: lambda = (parts_1 v ... v parts_k) o delta^-1.
MultiShuffleSplit multi_shuffle_factorize(const BasedInjection& lambda, const std::vector<int>& blocks);

/// The minimal permutation extending lambda: rho(a) = lambda(a) for a <= m,
/// increasing on the remaining letters.
BasedInjection complete_to_perm(const BasedInjection& lambda);

bool is_shuffle(const BasedInjection& p, int j, int k);
bool is_multishuffle(const BasedInjection& p, const std::vector<int>& blocks);

// -- enumeration (lexicographic on tables) -------------------------------------

std::vector<BasedInjection> enumerate_permutations(int n);
std::vector<BasedInjection> enumerate_injections(int m, int n);
std::vector<BasedMap> enumerate_based_maps(int m, int n, MapClass cls);
std::vector<BasedInjection> enumerate_shuffles(int j, int k);
std::vector<BasedInjection> enumerate_multishuffles(const std::vector<int>& blocks);

long long binomial(int n, int k);

// -- canonical encodings (used for component keys and file formats) -----------

std::string inj_key(const BasedInjection& f);    // "m>n:v1.v2....", "0>n:" for m = 0
std::string map_key(const BasedMap& f);
BasedInjection inj_from_key(const std::string& key);

}  // namespace forge
