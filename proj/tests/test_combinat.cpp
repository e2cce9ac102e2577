#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "forge/combinat.hpp"

#include <set>

using namespace forge;

TEST_CASE("composition of skip injections") {
    // sigma_1: 1->2 sends 1 to 2; sigma_2: 2->3 fixes 1, sends 2 to 3
    BasedInjection s1 = skip_injection(1, 2);
    BasedInjection s2 = skip_injection(2, 3);
    CHECK(s1(1) == 2);
    CHECK(s2(1) == 1);
    CHECK(s2(2) == 3);
    BasedInjection c = compose(s2, s1);
    CHECK(c.m == 1);
    CHECK(c.n == 3);
    CHECK(c(1) == 3);
}

TEST_CASE("identity is neutral and composition associative (exhaustive, levels <= 3)") {
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= n; ++m)
            for (auto& f : enumerate_injections(m, n)) {
                CHECK(compose(identity_perm(n), f) == f);
                CHECK(compose(f, identity_perm(m)) == f);
            }
    for (int p = 0; p <= 3; ++p)
        for (int n = 0; n <= p; ++n)
            for (int m = 0; m <= n; ++m)
                for (auto& h : enumerate_injections(n, p))
                    for (auto& g : enumerate_injections(m, n))
                        for (auto& f : enumerate_injections(0, m))
                            CHECK(compose(compose(h, g), f) == compose(h, compose(g, f)));
}

TEST_CASE("block sums") {
    CHECK(block_sum(identity_perm(1), identity_perm(1)) == identity_perm(2));
    BasedInjection s1 = skip_injection(1, 2);
    BasedInjection b = block_sum(s1, identity_perm(1));
    CHECK(b.m == 2);
    CHECK(b.n == 3);
    CHECK(b(1) == 2);
    CHECK(b(2) == 3);
    // functoriality on all composable pairs at levels <= 2
    for (int n1 = 0; n1 <= 2; ++n1)
        for (int m1 = 0; m1 <= n1; ++m1)
            for (int n2 = 0; n2 <= 2; ++n2)
                for (int m2 = 0; m2 <= n2; ++m2)
                    for (auto& f : enumerate_injections(m1, n1))
                        for (auto& g : enumerate_injections(m2, n2))
                            for (auto& fp : enumerate_injections(0, m1))
                                for (auto& gp : enumerate_injections(0, m2))
                                    CHECK(block_sum(compose(f, fp), compose(g, gp)) ==
                                          compose(block_sum(f, g), block_sum(fp, gp)));
}

TEST_CASE("shuffle factorization base cases") {
    // sigma entirely in the first block: alpha = id, sigma2 empty
    BasedInjection sigma = make_injection(2, 5, {2, 1});
    ShuffleSplit s = shuffle_factorize(sigma, 3, 2);
    CHECK(s.alpha == identity_perm(2));
    CHECK(s.sigma2.m == 0);
    CHECK(s.sigma1.map == std::vector<int>{2, 1});

    // n=2, p=q=1, sigma = swap
    BasedInjection sw = make_injection(2, 2, {2, 1});
    ShuffleSplit t = shuffle_factorize(sw, 1, 1);
    CHECK(t.alpha.map == std::vector<int>{2, 1});
    CHECK(t.sigma1 == identity_perm(1));
    CHECK(t.sigma2 == identity_perm(1));
    CHECK(compose(block_sum(t.sigma1, t.sigma2), invert_perm(t.alpha)) == sw);
}

TEST_CASE("shuffle factorization recomposes (exhaustive Lambda(2, 4), all splits)") {
    for (int p = 0; p <= 4; ++p) {
        int q = 4 - p;
        for (auto& sigma : enumerate_injections(2, 4)) {
            ShuffleSplit s = shuffle_factorize(sigma, p, q);
            CHECK(is_shuffle(s.alpha, s.sigma1.m, s.sigma2.m));
            CHECK(compose(block_sum(s.sigma1, s.sigma2), invert_perm(s.alpha)) == sigma);
        }
    }
}

TEST_CASE("shuffle orbit decomposition is bijective at n <= 4") {
    // Lambda(n, p+q) = { (s1 v s2) o alpha^-1 } ranges bijectively over triples
    for (int n = 0; n <= 4; ++n)
        for (int p = 0; p <= 3; ++p)
            for (int q = 0; p + q <= 4; ++q) {
                if (n > p + q) continue;
                std::set<BasedInjection> seen;
                long long count = 0;
                for (int j = std::max(0, n - q); j <= std::min(n, p); ++j) {
                    int k = n - j;
                    for (auto& alpha : enumerate_shuffles(j, k))
                        for (auto& s1 : enumerate_injections(j, p))
                            for (auto& s2 : enumerate_injections(k, q)) {
                                seen.insert(compose(block_sum(s1, s2), invert_perm(alpha)));
                                ++count;
                            }
                }
                CHECK(count == static_cast<long long>(seen.size()));
                CHECK(seen.size() == enumerate_injections(n, p + q).size());
            }
}

TEST_CASE("block permutation examples and cocycle identity") {
    CHECK(block_permutation(identity_perm(3), {1, 1, 2}) == identity_perm(4));
    BasedInjection sw = make_injection(2, 2, {2, 1});
    BasedInjection b = block_permutation(sw, {1, 2});
    CHECK(b.map == std::vector<int>{3, 1, 2});

    // cocycle: bp(tau' tau, J) = bp(tau', tau J) o bp(tau, J), blocks summing <= 4
    std::vector<std::vector<int>> blockss = {{1, 1, 1}, {2, 1, 1}, {1, 2, 1}, {1, 1, 2}, {0, 2, 1}, {2, 0, 2}};
    for (auto& J : blockss)
        for (auto& tau : enumerate_permutations(3))
            for (auto& taup : enumerate_permutations(3)) {
                std::vector<int> tauJ(3);
                for (int i = 1; i <= 3; ++i) tauJ[tau(i) - 1] = J[i - 1];
                CHECK(block_permutation(compose(taup, tau), J) ==
                      compose(block_permutation(taup, tauJ), block_permutation(tau, J)));
            }
}

TEST_CASE("enumeration counts") {
    CHECK(enumerate_injections(2, 3).size() == 6);
    CHECK(enumerate_shuffles(1, 2).size() == binomial(3, 1));
    CHECK(enumerate_based_maps(2, 2, MapClass::PS).size() == 4);
    CHECK(enumerate_based_maps(2, 2, MapClass::F).size() == 9);
    for (int n = 0; n <= 4; ++n) {
        long long fact = 1;
        for (int i = 2; i <= n; ++i) fact *= i;
        CHECK(static_cast<long long>(enumerate_permutations(n).size()) == fact);
    }
    // deterministic, duplicate-free
    auto l23 = enumerate_injections(2, 3);
    CHECK(std::set<BasedInjection>(l23.begin(), l23.end()).size() == l23.size());
    CHECK(enumerate_injections(2, 3) == enumerate_injections(2, 3));
}

TEST_CASE("adjacent word round-trip at n <= 5") {
    for (int n = 0; n <= 5; ++n)
        for (auto& sigma : enumerate_permutations(n)) {
            BasedInjection acc = identity_perm(n);
            // sigma = s_{w0} o s_{w1} o ... : rebuild right to left
            auto word = adjacent_word(sigma);
            for (auto it = word.rbegin(); it != word.rend(); ++it)
                acc = compose(adjacent_transposition(*it, n), acc);
            CHECK(acc == sigma);
        }
}

TEST_CASE("multi shuffle factorization recomposes") {
    std::vector<std::vector<int>> blockss = {{1, 1, 1}, {2, 1}, {0, 3}, {1, 0, 2}};
    for (auto& blocks : blockss) {
        int total = 0;
        for (int b : blocks) total += b;
        for (int m = 0; m <= total; ++m)
            for (auto& lam : enumerate_injections(m, total)) {
                MultiShuffleSplit s = multi_shuffle_factorize(lam, blocks);
                BasedInjection wedge{0, 0, {}};
                bool first = true;
                for (auto& part : s.parts) {
                    wedge = first ? part : block_sum(wedge, part);
                    first = false;
                }
                CHECK(compose(wedge, invert_perm(s.delta)) == lam);
                std::vector<int> sub(blocks.size());
                for (size_t t = 0; t < blocks.size(); ++t) sub[t] = s.parts[t].m;
                CHECK(is_multishuffle(s.delta, sub));
            }
    }
}

TEST_CASE("PS composition stays in PS") {
    for (auto& f : enumerate_based_maps(2, 2, MapClass::PS))
        for (auto& g : enumerate_based_maps(2, 2, MapClass::PS)) {
            BasedMap c = compose(g, f);
            CHECK(c.cls == MapClass::PS);
            for (int v : c.map) CHECK(v >= 1);
        }
}

TEST_CASE("injection keys round-trip") {
    for (int n = 0; n <= 3; ++n)
        for (int m = 0; m <= n; ++m)
            for (auto& f : enumerate_injections(m, n)) CHECK(inj_from_key(inj_key(f)) == f);
}
