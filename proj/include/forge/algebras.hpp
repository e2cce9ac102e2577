#pragma once

#include "forge/operads.hpp"

namespace forge {

/// The monad of an operad at a based object: C-bar X with unit and (possibly
/// truncation-clipped) multiplication.
struct OperadMonad {
    Operad c;
    BasedObject x;
    TensorLambda cx;       // C-bar X
    TensorLambda ccx;      // C-bar (C-bar X)
    GroundMorphism eta_x;  // X -> C-bar X
    PartialMorphism mu_x;  // C-bar C-bar X -> C-bar X
    bool approx = false;   // true when some gamma target exceeded N
};

OperadMonad monad(const Operad& c, const BasedObject& x);

/// Monad laws checked at the instances computable within truncation.
Report validate_monad_laws(const OperadMonad& m);

/// Functor image of a partial based map under D-bar.
PartialMorphism partial_tensor_lambda_map(const TensorLambda& src, const TensorLambda& tgt,
                                          const PartialMorphism& f);

struct AlgebraStructure {
    Operad c;
    BasedObject x;
    TensorLambda cx;        // C-bar X
    PartialMorphism theta;  // C-bar X -> X
};

AlgebraStructure make_algebra(const Operad& c, const BasedObject& x, const GroundMorphism& theta);
/// C(0) with the gamma action; the initial algebra.
AlgebraStructure initial_algebra(const Operad& c);
/// The free algebra (C-bar X, mu_X).
AlgebraStructure free_algebra(const Operad& c, const BasedObject& x);
/// The unique algebra map C(0) -> X of an algebra (theta_0).
GroundMorphism initial_algebra_map(const AlgebraStructure& a);

Report validate_algebra(const AlgebraStructure& a);

enum class ModuleSide { left, right };

struct ModuleStructure {
    LamSeq m;
    Operad c;
    ModuleSide side = ModuleSide::right;
    KellyProduct prod;   // M odot C (right) or C odot M (left)
    SeqMorphism action;  // prod -> M
};

ModuleStructure make_module(const LamSeq& m, const Operad& c, ModuleSide side,
                            const SeqMorphism& action);
/// The monoid acting on itself from the chosen side.
ModuleStructure self_module(const Operad& c, ModuleSide side);
/// A C-algebra as a left module concentrated at level 0.
ModuleStructure module_from_algebra(const AlgebraStructure& a);
/// Back from a level-0-supported left module; round-trips with the above.
AlgebraStructure algebra_from_module(const ModuleStructure& m);

Report validate_module(const ModuleStructure& m);

/// The induced flat action M-bar(C-bar X) -> M-bar X of a right action
/// M odot C -> M; partial where a target level exceeds the truncation.
PartialMorphism flat_action(const KellyProduct& mc, const SeqMorphism& action,
                            const TensorLambda& m_cx, const TensorLambda& cx,
                            const TensorLambda& mx);

// -- elementary maps of the scanning construction (FINSET only) ----------------

/// The wedge copower *Y as a Lambda-sequence: level k is the k-fold wedge.
LamSeq star_copower(const BasedObject& y, int N);
/// The smash product Y ^ X.
BasedObject smash(const BasedObject& y, const BasedObject& x);

struct RhoSmash {
    LamSeq star;       // *Y
    TensorLambda src;  // *Y (x)_Lambda X^(x)*
    BasedObject target;
    GroundMorphism rho;
};

RhoSmash rho_smash(const BasedObject& y, const BasedObject& x, int N);

/// The finite function object Map(V, W).
GroundObject hom_object(const GroundObject& v, const GroundObject& w);
/// Lambda-sequence Map(V, D(-)).
LamSeq hom_seq(const GroundObject& v, const LamSeq& d);

struct PhiHom {
    LamSeq homd;       // Map(V, D(-))
    TensorLambda src;  // Map(V, D) (x)_Lambda X^(x)*
    TensorLambda dx;   // D-bar X
    GroundObject target;  // Map(V, D-bar X)
    GroundMorphism phi;
};

PhiHom phi_hom(const GroundObject& v, const LamSeq& d, const BasedObject& x);

}  // namespace forge
