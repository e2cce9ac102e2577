#pragma once

#include "forge/seq.hpp"

#include <unordered_map>

namespace forge {

// -- keyed direct sums ---------------------------------------------------------
//
// Every product in this module is presented as a direct sum of flat tensor
// components with deterministic keys, so that quotients can be taken with the
// ground coequalizer and elements decoded back from canonical labels.

struct Component {
    std::string key;  // must not contain '#'
    std::vector<GroundObject> factors;
};

struct DirectSum {
    GroundTag tag = GroundTag::FINSET;
    std::vector<Component> comps;
    std::vector<GroundObject> locals;  // realized tensor per component
    std::vector<int> offsets;          // start index of each component in `total`
    GroundObject total;
    std::unordered_map<std::string, int> key_index;

    static DirectSum build(GroundTag tag, std::vector<Component> comps);
    int find(const std::string& key) const;  // -1 if absent
    int comp_of(int total_index) const;
    int local_of(int total_index) const;
    int flatten(int comp, int local) const { return offsets[comp] + local; }
    /// splits a total index into per-factor indices of its component
    std::vector<int> digits(int total_index) const;
};

/// Assembles a morphism src.total -> tgt.total from one map per source component,
/// each landing in a single target component.
GroundMorphism sum_morphism(
    const DirectSum& src, const DirectSum& tgt,
    const std::function<std::pair<std::string, GroundMorphism>(int)>& piece);

/// Assembles a morphism out of a direct sum from per-component maps into a
/// common target object.
GroundMorphism glue_from_sum(const DirectSum& src, const GroundObject& tgt,
                             const std::function<GroundMorphism(int)>& piece);

// -- Day convolution -----------------------------------------------------------

/// Decoded element/basis vector of a convolution level: component arities,
/// the multishuffle coset representative, and one factor label per slot.
struct PowerElem {
    std::vector<int> arities;
    BasedInjection mshuffle;
    std::vector<std::string> labels;
};

std::string power_key(const std::vector<int>& arities, const BasedInjection& mshuffle);

/// Closed form of the k-fold Day convolution D_1 (x) ... (x) D_k: level n is the
/// sum over arity tuples summing to n of the factor tensors times the
/// multishuffle coset representatives.
struct ConvProduct {
    std::vector<LamSeq> factors;
    int N = 0;
    GroundTag tag = GroundTag::FINSET;
    LamSeq seq;
    std::vector<DirectSum> sum;  // presentation per level

    PowerElem decode(int n, const std::string& label) const;
    std::string encode(int n, const PowerElem& e) const;
};

ConvProduct convolve(const std::vector<LamSeq>& factors);
ConvProduct day(const LamSeq& d, const LamSeq& e);
ConvProduct day_power(const LamSeq& e, int k, int N);

/// Normalizes a raw representative (factor labels at the given arities, with an
/// arbitrary slot injection n -> sum of arities). FINSET, or FINVEC where the
/// required actions permute basis labels.
PowerElem normal_form(const ConvProduct& p, int n, const std::vector<int>& arities,
                      const std::vector<std::string>& labels, const BasedInjection& slot);

/// Left Sigma_k action on a homogeneous power (all factors equal).
GroundMorphism power_sigma_action(const ConvProduct& p, int n, const BasedInjection& tau);
/// Unit insertion at position i (1-based): E^{(x)k}(n) -> E^{(x)k+1}(n).
GroundMorphism power_insert_unit(const ConvProduct& from, const ConvProduct& to, int n, int i);
/// Covariant action of an arbitrary injection lambda: k -> k' between powers.
GroundMorphism power_covariant(const ConvProduct& from, const ConvProduct& to, int n,
                               const BasedInjection& lambda);

// -- naive (coend) convolution oracle -------------------------------------------

/// The literal coend presentation of the Day convolution: components indexed by
/// arity pairs together with an explicit Lambda(n, j1+j2) slot, quotiented by
/// evaluation relations. Independent of the shuffle machinery.
struct NaiveDay {
    LamSeq d, e;
    int N = 0;
    LamSeq seq;
    std::vector<DirectSum> pre;
    std::vector<Coequalizer> quot;
};

NaiveDay naive_day(const LamSeq& d, const LamSeq& e);

struct IotaComparison {
    SeqMorphism iota;  // closed -> naive
    bool is_iso = false;
};

IotaComparison iota_compare(const LamSeq& d, const LamSeq& e);

// -- Kelly product ---------------------------------------------------------------

enum class KellyFlavor { sigma, lambda_closed, lambda_naive };

struct KellyElem {
    int k = 0;             // operator arity
    std::string op_label;  // element of D(k)
    PowerElem power;       // element of E^{(x)k}(n)
};

struct KellyProduct {
    LamSeq d, e;
    KellyFlavor flavor = KellyFlavor::lambda_closed;
    int N = 0;
    GroundTag tag = GroundTag::FINSET;
    std::vector<ConvProduct> powers;  // powers[k] = E^{(x)k}, k = 0..N
    std::vector<DirectSum> pre;       // per-level presentation
    std::vector<Coequalizer> quot;    // per-level quotient
    LamSeq seq;        // lambda flavors: the quotient Lambda-sequence
    SymSeq sym;        // sigma flavor: the quotient Sigma-sequence
    bool approx = false;

    KellyElem decode(int n, const std::string& label) const;
    /// presentation label of a raw element (before the quotient)
    std::string pre_label(int n, const KellyElem& e) const;
    /// canonical label of the class of a raw element
    std::string normal_form(int n, const KellyElem& e) const;
};

KellyProduct kelly(const LamSeq& d, const LamSeq& e, KellyFlavor flavor);

/// Functoriality of the Kelly product: the induced map D odot E -> D' odot E'.
SeqMorphism kelly_map(const KellyProduct& src, const KellyProduct& tgt, const SeqMorphism& f,
                      const SeqMorphism& g);

/// Canonical comparison between two flavors built on the same presentation
/// (lambda_closed vs lambda_naive): levelwise map + isomorphism check.
struct LevelIso {
    std::vector<GroundMorphism> at;
    bool is_iso = false;
};

LevelIso kelly_flavors_compare(const KellyProduct& closed, const KellyProduct& naive);

/// Unit isomorphisms of Theorem "monoidal with unit object I_1".
SeqMorphism kelly_left_unit(const KellyProduct& p);   // I_1 odot D -> D
SeqMorphism kelly_right_unit(const KellyProduct& p);  // D odot I_1 -> D

/// Associativity isomorphism (D odot E) odot F -> D odot (E odot F), built
/// elementwise and verified against both quotient presentations.
SeqMorphism kelly_associator(const KellyProduct& de, const KellyProduct& de_f,
                             const KellyProduct& ef, const KellyProduct& d_ef);

// -- functor tensor D (x)_Lambda X^{(x)*} ---------------------------------------

GroundObject power_object(const BasedObject& x, int k);
GroundMorphism power_map(const BasedObject& x, const BasedInjection& lambda);
GroundMorphism power_map_of(const GroundMorphism& f, const BasedObject& x, const BasedObject& y,
                            int k);  // f^{(x)k}

struct TensorLambda {
    LamSeq d;
    BasedObject x;
    int N = 0;
    DirectSum pre;
    Coequalizer quot;
    BasedObject result;
    bool approx = false;

    std::string pre_label(int k, const std::string& op_label,
                          const std::vector<std::string>& xs) const;
    std::string normal_form(int k, const std::string& op_label,
                            const std::vector<std::string>& xs) const;
};

TensorLambda tensor_lambda(const LamSeq& d, const BasedObject& x);

/// Induced map D-bar X -> D-bar Y along a based map f: X -> Y.
GroundMorphism tensor_lambda_map(const TensorLambda& src, const TensorLambda& tgt,
                                 const GroundMorphism& f);
/// Induced map D-bar X -> D'-bar X along a sequence morphism.
GroundMorphism tensor_lambda_seqmap(const TensorLambda& src, const TensorLambda& tgt,
                                    const SeqMorphism& f);

// -- structural isomorphisms -----------------------------------------------------

/// Lemma "D odot i0 X iso i0 D-bar X": levelwise iso from the Kelly product
/// against i0(result of tensor_lambda).
SeqMorphism kelly_i0_iso(const KellyProduct& p, const TensorLambda& tl);

/// Theorem "(D odot E) (x)_Lambda X^* iso D-bar(E-bar X)": the composition iso.
struct ComposeVsKelly {
    TensorLambda lhs;     // (D odot E) tensored with X^*
    TensorLambda ex;      // E-bar X
    TensorLambda rhs;     // D-bar (E-bar X)
    GroundMorphism iso;   // lhs.result -> rhs.result
    bool is_iso = false;
};

ComposeVsKelly compose_vs_kelly(const KellyProduct& de, const BasedObject& x);

/// Proposition "strong symmetric monoidal": (D boxtimes D') odot E iso
/// (D odot E) boxtimes (D' odot E).
struct DistIso {
    std::vector<GroundMorphism> at;
    bool is_iso = false;
};
DistIso kelly_distribution(const LamSeq& d, const LamSeq& dp, const LamSeq& e);

/// The X^{(x)*} analogue: (D boxtimes D')-bar X iso D-bar X (x) D'-bar X.
struct Dist2Iso {
    GroundMorphism iso;
    bool is_iso = false;
};
Dist2Iso tensor_distribution(const LamSeq& d, const LamSeq& dp, const BasedObject& x);

/// i1 is strong monoidal: i1(X) odot i1(Y) iso i1(X (x) Y).
SeqMorphism i1_strong_monoidal(const BasedObject& x, const BasedObject& y, int N);

}  // namespace forge
