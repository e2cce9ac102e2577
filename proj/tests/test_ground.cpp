#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "forge/ground.hpp"

using namespace forge;

namespace {

GroundObject fs(std::vector<std::string> ls) {
    return GroundObject(GroundTag::FINSET, std::move(ls));
}
GroundObject vs(std::vector<std::string> ls) {
    return GroundObject(GroundTag::FINVEC, std::move(ls));
}

/// every FINSET morphism between objects of the given sizes
std::vector<GroundMorphism> all_maps(const GroundObject& a, const GroundObject& b) {
    std::vector<GroundMorphism> out;
    if (a.size() == 0) {
        out.push_back(from_initial(b));
        return out;
    }
    if (b.size() == 0) return out;
    std::vector<int> t(a.size(), 0);
    for (;;) {
        out.push_back(from_table(a, b, t));
        int i = a.size() - 1;
        while (i >= 0 && t[i] == b.size() - 1) t[i--] = 0;
        if (i < 0) break;
        ++t[i];
    }
    return out;
}

}  // namespace

TEST_CASE("tensor of finite sets") {
    GroundObject ab = fs({"a", "b"}), x = fs({"x"});
    GroundObject t = tensor(ab, x);
    CHECK(t.size() == 2);
    CHECK(t.label(0) == "(a,x)");
    CHECK(t.label(1) == "(b,x)");
    // unitor I (x) A -> A is an isomorphism
    CHECK(is_isomorphism(left_unitor(ab)));
    CHECK(is_isomorphism(right_unitor(ab)));
}

TEST_CASE("tensor dimensions in FINVEC") {
    GroundObject v2 = vs({"u", "v"}), v3 = vs({"p", "q", "r"});
    CHECK(tensor(v2, v3).size() == 6);
}

TEST_CASE("initial object absorbs products") {
    GroundObject e = initial_object(GroundTag::FINSET);
    GroundObject ab = fs({"a", "b"});
    CHECK(tensor(e, ab).size() == 0);
}

TEST_CASE("mixed tags rejected") {
    CHECK_THROWS_AS(tensor(fs({"a"}), vs({"x"})), TagMismatchError);
    CHECK_THROWS_AS(coproduct(fs({"a"}), vs({"x"})), TagMismatchError);
}

TEST_CASE("coproduct disambiguates labels and is correct in FINVEC") {
    Coproduct c = coproduct(fs({"a"}), fs({"a"}));
    CHECK(c.ob.size() == 2);
    CHECK(c.ob.label(0) != c.ob.label(1));
    CHECK(coproduct(vs({"u", "v"}), vs({"p", "q", "r"})).ob.size() == 5);
}

TEST_CASE("coproduct with the initial object keeps size") {
    GroundObject a = fs({"a", "b"});
    Coproduct c = coproduct(a, initial_object(GroundTag::FINSET));
    CHECK(c.ob.size() == a.size());
    CHECK(is_isomorphism(c.injections[0]));
}

TEST_CASE("coequalizer of equal maps is the identity") {
    GroundObject a = fs({"a"}), b = fs({"x", "y"});
    GroundMorphism f = from_label_fn(a, b, [](const std::string&) { return "x"; });
    Coequalizer c = coequalizer(f, f);
    CHECK(c.ob == b);
    CHECK(is_identity(c.proj));
}

TEST_CASE("coequalizer glues one pair") {
    GroundObject a = fs({"1"}), b = fs({"x", "y"});
    GroundMorphism f = from_label_fn(a, b, [](const std::string&) { return "x"; });
    GroundMorphism g = from_label_fn(a, b, [](const std::string&) { return "y"; });
    Coequalizer c = coequalizer(f, g);
    CHECK(c.ob.size() == 1);
    CHECK(c.ob.label(0) == "x");  // least label representative
    CHECK(compose(c.proj, f) == compose(c.proj, g));
}

TEST_CASE("FINVEC coequalizer via rank: f = e1, g = e2 gives dim 1") {
    // independent oracle: dim Q = dim B - rank(f - g)
    GroundObject a = vs({"t"}), b = vs({"e1", "e2"});
    Matrix mf(2, 1), mg(2, 1);
    mf.at(0, 0) = 1;
    mg.at(1, 0) = 1;
    GroundMorphism f = from_matrix(a, b, mf), g = from_matrix(a, b, mg);
    Matrix diff(2, 1);
    diff.at(0, 0) = 1;
    diff.at(1, 0) = -1;
    CHECK(rank(diff) == 1);
    Coequalizer c = coequalizer(f, g);
    CHECK(c.ob.size() == 2 - rank(diff));
    CHECK(compose(c.proj, f) == compose(c.proj, g));
    CHECK(compose(c.proj, c.section) == identity_morphism(c.ob));
}

TEST_CASE("coequalizer universal property by exhaustive search") {
    // all parallel pairs f,g: A -> B with |A| = 2, |B| = 3, all h with hf = hg
    GroundObject a = fs({"p", "q"}), b = fs({"x", "y", "z"}), z = fs({"0", "1"});
    auto fgs = all_maps(a, b);
    auto hs = all_maps(b, z);
    for (auto& f : fgs)
        for (auto& g : fgs) {
            Coequalizer c = coequalizer(f, g);
            for (auto& h : hs) {
                if (!(compose(h, f) == compose(h, g))) continue;
                GroundMorphism u = factor_through(c, h);
                CHECK(compose(u, c.proj) == h);
                // uniqueness: proj is surjective, so u is determined entry by entry
                int count = 0;
                for (auto& u2 : all_maps(c.ob, z))
                    if (compose(u2, c.proj) == h) ++count;
                CHECK(count == 1);
            }
        }
}

TEST_CASE("braiding is self-inverse and natural") {
    GroundObject a = fs({"a", "b"}), b = fs({"x"});
    GroundMorphism sw = braiding(a, b);
    CHECK(compose(braiding(b, a), sw) == identity_morphism(tensor(a, b)));
    CHECK(sw.target.label(0) == "(x,a)");

    // naturality square for all f: A -> A', g: B -> B' on small sets
    GroundObject a2 = fs({"s", "t"}), b2 = fs({"u", "v", "w"});
    for (auto& f : all_maps(a, a2))
        for (auto& g : all_maps(b, b2)) {
            GroundMorphism lhs = compose(braiding(a2, b2), tensor(f, g));
            GroundMorphism rhs = compose(tensor(g, f), braiding(a, b));
            CHECK(lhs == rhs);
        }
}

TEST_CASE("functoriality of tensor and coproduct on composable pairs") {
    GroundObject a = fs({"a", "b"}), b = fs({"x", "y"}), c = fs({"m", "n"});
    auto f1s = all_maps(a, b);
    auto f2s = all_maps(b, c);
    for (auto& f : f1s)
        for (auto& fp : f2s)
            for (auto& g : f1s)
                for (auto& gp : f2s) {
                    CHECK(tensor(compose(fp, f), compose(gp, g)) ==
                          compose(tensor(fp, gp), tensor(f, g)));
                }
}

TEST_CASE("tensor distributes over coproduct") {
    GroundObject a = fs({"a", "b"}), b = fs({"x"}), c = fs({"y", "z"});
    Coproduct bc = coproduct(b, c);
    GroundObject lhs = tensor(a, bc.ob);
    Coproduct rhs = coproduct(tensor(a, b), tensor(a, c));
    CHECK(lhs.size() == rhs.ob.size());
}

TEST_CASE("FINVEC zero object is initial and terminal") {
    GroundObject z = initial_object(GroundTag::FINVEC);
    CHECK(z.size() == 0);
    GroundObject v = vs({"u", "v"});
    GroundMorphism into = from_initial(v);
    CHECK(into.mat.cols == 0);
    // unique map v -> 0 too
    GroundMorphism out = from_matrix(v, z, Matrix(0, 2));
    CHECK(out.mat.rows == 0);
}

TEST_CASE("FINSET singleton is terminal and the unit") {
    GroundObject i = unit_object(GroundTag::FINSET);
    CHECK(i.size() == 1);
    CHECK(i.label(0) == "*");
}

TEST_CASE("factor_permute composes like permutations") {
    GroundObject a = fs({"a", "b"}), b = fs({"x"}), c = fs({"m", "n"});
    GroundMorphism p = factor_permute({a, b, c}, {2, 0, 1});  // a->pos2, b->pos0, c->pos1
    CHECK(p.target.label(0) == "(x,m,a)");
    CHECK(is_isomorphism(p));
}

TEST_CASE("linearize preserves composition") {
    GroundObject a = fs({"a", "b"}), b = fs({"x", "y"});
    for (auto& f : all_maps(a, b))
        for (auto& g : all_maps(b, a))
            CHECK(linearize(compose(g, f)) == compose(linearize(g), linearize(f)));
}

TEST_CASE("partial morphisms compose and compare") {
    GroundObject a = fs({"a", "b"}), b = fs({"x", "y"});
    GroundMorphism f = from_label_fn(a, b, [](const std::string& l) { return l == "a" ? "x" : "y"; });
    PartialMorphism pf = as_partial(f);
    pf.defined[1] = 0;
    PartialMorphism comp = compose(as_partial(identity_morphism(b)), pf);
    CHECK(!comp.total());
    int compared = 0;
    CHECK(agree_where_defined(comp, as_partial(f), &compared));
    CHECK(compared == 1);
}
