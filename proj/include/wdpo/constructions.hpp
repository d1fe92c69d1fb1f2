#ifndef WDPO_CONSTRUCTIONS_HPP
#define WDPO_CONSTRUCTIONS_HPP

#include <string>
#include <vector>

#include "wdpo/fin_attr.hpp"

namespace wdpo {

//      neutral
//   F ---------> G
//   |            |
//   | other      | from_neutral_side (carries other's alpha)
//   v            v
//   H ---------> E
//     from_other_side (neutral)
struct PushoutResult {
    AttrGraphPtr apex;
    AttrMorphism from_neutral_side;
    AttrMorphism from_other_side;
};

// Apex ids: a class containing elements of H keeps the smallest such id;
// elements only reachable from G are named "<prefix>:<id>" (plain <id> when
// the prefix is empty), with "'" appended until unique.
PushoutResult pushout_along_neutral(const AttrMorphism& neutral, const AttrMorphism& other,
                                    const std::string& prefix = "po");

struct PullbackResult {
    AttrGraphPtr apex;
    AttrMorphism to_first;
    AttrMorphism to_second;
};

// Fibered product of two neutral morphisms with a common target. Apex ids are
// "a" for a pair (a,a) and "<a,b>" otherwise.
PullbackResult pullback_of_neutrals(const AttrMorphism& f1, const AttrMorphism& f2);

struct LimitResult {
    AttrGraphPtr apex;
    std::vector<AttrMorphism> legs;  // apex -> source of each input
    AttrMorphism to_target;          // apex -> common target
};

// Iterated pullback, left-associated in list order.
LimitResult limit_of_neutrals(const std::vector<AttrMorphism>& legs);

struct ColimitResult {
    AttrGraphPtr apex;
    std::vector<AttrMorphism> legs;  // target of each input -> apex
    AttrMorphism from_source;        // common source -> apex
};

// Iterated pushout, left-associated in list order.
ColimitResult colimit_of_neutrals(const std::vector<AttrMorphism>& legs,
                                  const std::string& prefix = "");

struct ComplementResult {
    AttrGraphPtr complement;
    AttrMorphism k_to_complement;
    AttrMorphism complement_to_host;
    // Labels removed from each host element in the image of the match.
    Labeling deletion_sets;
};

// Pushout complement of l: K -> L (neutral, mono) and m: L -> G with
// maximal deletion sets. Throws GluingError when an edge would dangle, when
// m identifies a deleted element, or when a deleted element carries host
// labels not accounted for by the match.
ComplementResult pushout_complement(const AttrMorphism& l, const AttrMorphism& m);

enum class UniversalKind { Pushout, Pullback };

// Pushout: first is the neutral leg, second the other leg; to_apex_first and
// to_apex_second leave their targets. Pullback: first and second are the
// cospan legs; to_apex_* are the projections out of the apex (source side).
struct Square {
    AttrMorphism first;
    AttrMorphism second;
    AttrMorphism apex_first;
    AttrMorphism apex_second;
};

// A candidate cocone (pushout) or cone (pullback) over the same diagram.
struct Wedge {
    AttrMorphism first;
    AttrMorphism second;
};

inline constexpr std::size_t kUniversalSearchLimit = 12;

// Exhaustive search for mediating morphisms; true iff exactly one exists.
// Throws ConstructionError when a graph exceeds kUniversalSearchLimit
// elements or the candidate does not commute.
bool check_universal_property(UniversalKind kind, const Square& square, const Wedge& candidate);

Square as_square(const AttrMorphism& neutral, const AttrMorphism& other, const PushoutResult& po);
Square as_square(const AttrMorphism& f1, const AttrMorphism& f2, const PullbackResult& pb);

} // namespace wdpo

#endif // WDPO_CONSTRUCTIONS_HPP
