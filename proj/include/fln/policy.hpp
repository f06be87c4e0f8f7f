// Security labels, policies and the lattice operations that everything else
// is built on.  A label pairs a secrecy tag with an integrity tag; a policy is
// a sequence of labels ending in Top (no further relabeling allowed), Bottom
// (unrestricted) or Unlabeled (the marker for unannotated program text, which
// never takes part in ordering or joins).
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace fln {

enum class TagKind : uint8_t { Bottom, Top, Atom };

// Secrecy tags: Bottom (public) below every atom, Top (most secret) above.
struct SecrecyTag {
    TagKind kind = TagKind::Bottom;
    std::string atom;  // non-empty iff kind == Atom

    static SecrecyTag bottom() { return {TagKind::Bottom, {}}; }
    static SecrecyTag top() { return {TagKind::Top, {}}; }
    static SecrecyTag make(std::string name) { return {TagKind::Atom, std::move(name)}; }
    bool operator==(const SecrecyTag&) const = default;
};

// Integrity tags: Top (least trusted) below every atom, Bottom (most trusted)
// above.  Note the inversion relative to secrecy: the lattice top is
// (secrecy Top, integrity Bottom) and the lattice bottom is (secrecy Bottom,
// integrity Top).
struct IntegrityTag {
    TagKind kind = TagKind::Bottom;
    std::string atom;

    static IntegrityTag bottom() { return {TagKind::Bottom, {}}; }
    static IntegrityTag top() { return {TagKind::Top, {}}; }
    static IntegrityTag make(std::string name) { return {TagKind::Atom, std::move(name)}; }
    bool operator==(const IntegrityTag&) const = default;
};

struct Label {
    SecrecyTag secrecy;
    IntegrityTag integrity;

    bool operator==(const Label&) const = default;
    // Lattice extremes: top = (TopS, BottomI), bottom = (BottomS, TopI).
    static Label top() { return {SecrecyTag::top(), IntegrityTag::bottom()}; }
    static Label bottom() { return {SecrecyTag::bottom(), IntegrityTag::top()}; }
};

enum class Terminal : uint8_t { Top, Bottom, Unlabeled };

struct Policy {
    std::vector<Label> labels;
    Terminal term = Terminal::Bottom;

    bool operator==(const Policy&) const = default;
    bool is_unlabeled() const { return term == Terminal::Unlabeled; }
    // "Erased" policies need no wrapper type when translated.
    bool is_erasable() const { return labels.empty(); }

    static Policy bottom() { return {{}, Terminal::Bottom}; }
    static Policy top() { return {{}, Terminal::Top}; }
    static Policy unlabeled() { return {{}, Terminal::Unlabeled}; }
    static Policy cons(Label l, Policy rest) {
        rest.labels.insert(rest.labels.begin(), std::move(l));
        return rest;
    }
    static Policy single(Label l, Terminal t = Terminal::Bottom) { return {{std::move(l)}, t}; }
    // Policy without its first label.
    Policy tail() const {
        Policy p = *this;
        p.labels.erase(p.labels.begin());
        return p;
    }
};

struct LatticeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One relabel capability, from a declared d&e function or an explicit relabel
// context entry.  Each capability rewrites exactly one head label.
struct RelabelCapability {
    Label from;
    Label to;
    std::string source;  // function name, or empty for an explicit relabel

    bool operator==(const RelabelCapability&) const = default;
};

bool secrecy_leq(const SecrecyTag& a, const SecrecyTag& b);
bool integrity_leq(const IntegrityTag& a, const IntegrityTag& b);
bool label_leq(const Label& a, const Label& b);
Label label_join(const Label& a, const Label& b);

// Pointwise ordering; throws LatticeError on Unlabeled operands.
bool policy_leq(const Policy& p, const Policy& q);
// Least upper bound; joining distinct atoms in one component yields that
// component's top (the only upper bound in the flat atom lattice).
Policy policy_join(const Policy& p, const Policy& q);

// True iff q is reachable from p through the relabel capabilities: a head
// label may be consumed when a capability covers it and the next label, and a
// policy may always be weakened upward first.
bool rewrites_to(const std::vector<RelabelCapability>& caps, const Policy& p, const Policy& q);

// True iff no policy reachable from p flows below the attacker's policy.
bool in_high(const Policy& attacker, const std::vector<RelabelCapability>& caps, const Policy& p);

// Reachable "minimal" policies under the rewrite relation (exposed for
// property tests; rewrites_to and in_high are defined in terms of it).
std::vector<Policy> rewrite_closure(const std::vector<RelabelCapability>& caps, const Policy& p);

std::string to_string(const Label& l);
std::string to_string(const Policy& p);

}  // namespace fln
