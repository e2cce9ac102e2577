#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "forge/seq.hpp"

using namespace forge;

namespace {

std::string perm_label(const BasedInjection& p) {
    return inj_key(p);
}

/// permutation deleting source letter i and renumbering (the Ass degeneracy)
BasedInjection delete_letter(const BasedInjection& tau, int i) {
    int n = tau.n;
    std::vector<int> map;
    for (int a = 1; a <= n; ++a) {
        if (a == i) continue;
        int v = tau(a);
        map.push_back(v > tau(i) ? v - 1 : v);
    }
    return make_injection(n - 1, n - 1, std::move(map));
}

/// The symmetric-groups Lambda-sequence underlying the associative operad,
/// built directly from permutation tables (test oracle).
LamSeq ass_seq(int N) {
    LamSeq d;
    d.tag = GroundTag::FINSET;
    d.N = N;
    for (int n = 0; n <= N; ++n) {
        std::vector<std::string> labels;
        for (auto& p : enumerate_permutations(n)) labels.push_back(perm_label(p));
        d.levels.push_back(GroundObject(GroundTag::FINSET, std::move(labels)));
    }
    d.trans.resize(N + 1);
    d.deg.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        for (int i = 1; i < n; ++i) {
            BasedInjection si = adjacent_transposition(i, n);
            d.trans[n].push_back(from_label_fn(d.levels[n], d.levels[n], [&](const std::string& l) {
                return perm_label(compose(inj_from_key(l), si));
            }));
        }
        for (int i = 1; i <= n; ++i)
            d.deg[n].push_back(from_label_fn(d.levels[n], d.levels[n - 1], [&](const std::string& l) {
                return perm_label(delete_letter(inj_from_key(l), i));
            }));
    }
    d.base = from_label_fn(unit_object(GroundTag::FINSET), d.levels[0],
                           [&](const std::string&) { return d.levels[0].label(0); });
    enable_act_cache(d);
    return d;
}

std::vector<GroundMorphism> all_based_maps(const BasedObject& x, const BasedObject& y) {
    std::vector<GroundMorphism> out;
    if (x.carrier.size() == 0) return out;
    std::vector<int> t(x.carrier.size(), 0);
    for (;;) {
        GroundMorphism f = from_table(x.carrier, y.carrier, t);
        if (compose(f, x.base) == y.base) out.push_back(f);
        int i = x.carrier.size() - 1;
        while (i >= 0 && t[i] == y.carrier.size() - 1) t[i--] = 0;
        if (i < 0) break;
        ++t[i];
    }
    return out;
}

}  // namespace

TEST_CASE("I0 and I1 validate") {
    for (GroundTag tag : {GroundTag::FINSET, GroundTag::FINVEC}) {
        LamSeq i0 = I0(tag, 3);
        CHECK(validate(i0).ok());
        CHECK(i0.levels[0] == unit_object(tag));
        CHECK(i0.levels[1].size() == 0);
        CHECK(is_unital(i0));

        LamSeq i1 = I1(tag, 3);
        CHECK(validate(i1).ok());
        CHECK(i1.levels[1] == unit_object(tag));
        CHECK(i1.levels[2].size() == 0);
        CHECK(is_unital(i1));
    }
}

TEST_CASE("I1: the injection 0 -> 1 acts as the identity of I") {
    LamSeq i1 = I1(GroundTag::FINSET, 2);
    GroundMorphism a = act(i1, make_injection(0, 1, {}));
    CHECK(a.source == unit_object(GroundTag::FINSET));
    CHECK(a.target == unit_object(GroundTag::FINSET));
    CHECK(is_identity(a));
}

TEST_CASE("identity actions always validate") {
    SymSeq s;
    s.tag = GroundTag::FINSET;
    s.N = 3;
    for (int n = 0; n <= 3; ++n)
        s.levels.push_back(GroundObject(GroundTag::FINSET, {"p", "q"}));
    s.trans.resize(4);
    for (int n = 0; n <= 3; ++n)
        for (int i = 1; i < n; ++i) s.trans[n].push_back(identity_morphism(s.levels[n]));
    CHECK(validate(s).ok());
}

TEST_CASE("the permutation sequence validates and acts by right composition") {
    LamSeq ass = ass_seq(3);
    CHECK(validate(ass).ok());
    // derived action of an arbitrary permutation equals the direct table
    for (int n = 0; n <= 3; ++n)
        for (auto& sigma : enumerate_permutations(n)) {
            GroundMorphism m = act_perm(ass, n, sigma);
            for (auto& tau : enumerate_permutations(n)) {
                int src = ass.levels[n].index_of(perm_label(tau));
                CHECK(m.table[src] == ass.levels[n].index_of(perm_label(compose(tau, sigma))));
            }
        }
}

TEST_CASE("act is functorial on all composable pairs at N = 3") {
    LamSeq ass = ass_seq(3);
    for (int p = 0; p <= 3; ++p)
        for (int n = 0; n <= p; ++n)
            for (int m = 0; m <= n; ++m)
                for (auto& g : enumerate_injections(n, p))
                    for (auto& f : enumerate_injections(m, n))
                        CHECK(act(ass, compose(g, f)) == compose(act(ass, f), act(ass, g)));
}

TEST_CASE("corrupted transposition table is reported as a braid failure") {
    LamSeq ass = ass_seq(3);
    // swap two entries of s_1 at level 3
    std::swap(ass.trans[3][0].table[0], ass.trans[3][0].table[1]);
    ass.cache.reset();
    enable_act_cache(ass);
    Report rep = validate(ass);
    CHECK(!rep.ok());
    bool braid_or_involution = false;
    for (auto& f : rep.findings)
        if ((f.check == "braid" || f.check == "involution") && f.location.find("level 3") != std::string::npos)
            braid_or_involution = true;
    CHECK(braid_or_involution);
}

TEST_CASE("embed and p0") {
    BasedObject x = based(GroundObject(GroundTag::FINSET, {"*", "a"}), "*");
    LamSeq d0 = embed(x, EmbedMode::i0, 3);
    CHECK(validate(d0).ok());
    CHECK(d0.levels[0].size() == 2);
    CHECK(d0.levels[1].size() == 0);
    CHECK(!is_unital(d0));

    LamSeq d1 = embed(x, EmbedMode::i1, 3);
    CHECK(validate(d1).ok());
    CHECK(d1.levels[1].size() == 2);

    BasedObject back = p0(d0);
    CHECK(back == x);

    CHECK(seq_equal(embed(based_unit(GroundTag::FINSET), EmbedMode::i0, 3), I0(GroundTag::FINSET, 3)));
    CHECK(seq_equal(embed(based_unit(GroundTag::FINSET), EmbedMode::i1, 3), I1(GroundTag::FINSET, 3)));
}

TEST_CASE("i0 -| p0 adjunction hom bijection on small FINSET instances") {
    LamSeq ass = ass_seq(2);
    for (int xs = 1; xs <= 3; ++xs) {
        std::vector<std::string> labels;
        for (int i = 0; i < xs; ++i) labels.push_back(i == 0 ? "*" : "x" + std::to_string(i));
        BasedObject x = based(GroundObject(GroundTag::FINSET, labels), "*");
        // morphisms i0X -> D are exactly based maps X -> D(0): count both sides
        size_t rhs = all_based_maps(x, p0(ass)).size();
        LamSeq i0x = embed(x, EmbedMode::i0, 2);
        size_t lhs = 0;
        for (auto& f : all_based_maps(x, p0(ass))) {
            SeqMorphism sm;
            sm.source = i0x;
            sm.target = ass;
            sm.at.push_back(f);
            for (int n = 1; n <= 2; ++n) {
                GroundMorphism empty;
                empty.tag = GroundTag::FINSET;
                empty.source = i0x.levels[n];
                empty.target = ass.levels[n];
                sm.at.push_back(empty);
            }
            if (validate(sm).ok()) ++lhs;
        }
        CHECK(lhs == rhs);
    }
}

TEST_CASE("linearized sequence validates") {
    LamSeq ass = ass_seq(2);
    LamSeq lin = linearize(ass);
    CHECK(lin.tag == GroundTag::FINVEC);
    CHECK(validate(lin).ok());
}

TEST_CASE("re-truncation") {
    LamSeq ass = ass_seq(3);
    LamSeq cut = re_truncate(ass, 2);
    CHECK(cut.N == 2);
    CHECK(validate(cut).ok());
    CHECK_THROWS_AS(cut.level(3), TruncationError);
    CHECK_THROWS_AS(re_truncate(cut, 3), TruncationError);
}
