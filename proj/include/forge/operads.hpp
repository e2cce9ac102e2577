#pragma once

#include "forge/products.hpp"

#include <map>

namespace forge {

std::string gamma_key(int k, const std::vector<int>& js);

/// Classical operad data: a Lambda-sequence together with the unit iota and the
/// structure maps gamma, stored for every within-truncation arity shape.
struct Operad {
    LamSeq seq;
    GroundMorphism unit;  // iota: I -> C(1)
    std::map<std::string, GroundMorphism> gamma;

    int N() const { return seq.N; }
    GroundTag tag() const { return seq.tag; }
    const GroundMorphism& gamma_at(int k, const std::vector<int>& js) const;
    bool has_gamma(int k, const std::vector<int>& js) const;
};

bool operad_equal(const Operad& a, const Operad& b);

/// The degeneracies forced by gamma, iota and the base map.
std::vector<std::vector<GroundMorphism>> derive_injections(const Operad& o);

/// Checks associativity, both unit laws, both equivariance laws and the
/// coincidence of the stored injections with the derived ones.
Report validate_operad(const Operad& o);

/// A monoid in (Lambda-sequences, odot, I_1).
struct MonoidSeq {
    LamSeq seq;
    KellyProduct square;  // C odot C, lambda_closed
    SeqMorphism mu;       // square -> C
    SeqMorphism eta;      // I_1 -> C
};

MonoidSeq to_monoid(const Operad& o);
Operad from_monoid(const MonoidSeq& m);
bool monoid_equal(const MonoidSeq& a, const MonoidSeq& b);
Report validate_monoid(const MonoidSeq& m);

enum class BuiltinOperad { com, ass, trivial, end };

/// com: one point everywhere; ass: symmetric groups with block substitution;
/// trivial: I_1; end: the endomorphism operad of a based finite set.
Operad builtin_operad(BuiltinOperad which, int N, const BasedObject* end_carrier = nullptr);

Operad linearize(const Operad& o);

}  // namespace forge
