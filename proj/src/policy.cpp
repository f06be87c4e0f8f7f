#include "fln/policy.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace fln {

bool secrecy_leq(const SecrecyTag& a, const SecrecyTag& b) {
    if (a.kind == TagKind::Bottom || b.kind == TagKind::Top) return true;
    if (a.kind == TagKind::Atom && b.kind == TagKind::Atom) return a.atom == b.atom;
    return a == b;
}

bool integrity_leq(const IntegrityTag& a, const IntegrityTag& b) {
    // Integrity order is inverted: Top is the least element, Bottom the greatest.
    if (a.kind == TagKind::Top || b.kind == TagKind::Bottom) return true;
    if (a.kind == TagKind::Atom && b.kind == TagKind::Atom) return a.atom == b.atom;
    return a == b;
}

bool label_leq(const Label& a, const Label& b) {
    return secrecy_leq(a.secrecy, b.secrecy) && integrity_leq(a.integrity, b.integrity);
}

static SecrecyTag secrecy_join(const SecrecyTag& a, const SecrecyTag& b) {
    if (secrecy_leq(a, b)) return b;
    if (secrecy_leq(b, a)) return a;
    return SecrecyTag::top();  // two distinct atoms
}

static IntegrityTag integrity_join(const IntegrityTag& a, const IntegrityTag& b) {
    if (integrity_leq(a, b)) return b;
    if (integrity_leq(b, a)) return a;
    return IntegrityTag::bottom();  // two distinct atoms; Bottom is the integrity greatest
}

Label label_join(const Label& a, const Label& b) {
    return {secrecy_join(a.secrecy, b.secrecy), integrity_join(a.integrity, b.integrity)};
}

static void reject_unlabeled(const Policy& p, const Policy& q, const char* op) {
    if (p.is_unlabeled() || q.is_unlabeled())
        throw LatticeError(std::string("unlabeled policy supplied to ") + op);
}

// p <= q with Bottom absorbing on the left and Top on the right.
static bool leq_from(const Policy& p, size_t i, const Policy& q, size_t j) {
    bool p_done = i >= p.labels.size();
    bool q_done = j >= q.labels.size();
    if (p_done && p.term == Terminal::Bottom) return true;
    if (q_done && q.term == Terminal::Top) return true;
    if (p_done || q_done) return p_done && q_done && p.term == q.term;
    return label_leq(p.labels[i], q.labels[j]) && leq_from(p, i + 1, q, j + 1);
}

bool policy_leq(const Policy& p, const Policy& q) {
    reject_unlabeled(p, q, "policy_leq");
    return leq_from(p, 0, q, 0);
}

Policy policy_join(const Policy& p, const Policy& q) {
    reject_unlabeled(p, q, "policy_join");
    if (p.labels.empty()) {
        if (p.term == Terminal::Bottom) return q;
        return Policy::top();
    }
    if (q.labels.empty()) {
        if (q.term == Terminal::Bottom) return p;
        return Policy::top();
    }
    Policy rest = policy_join(p.tail(), q.tail());
    return Policy::cons(label_join(p.labels.front(), q.labels.front()), rest);
}

// One generalized rewrite step: consume the head of p with a capability.  The
// upward-weakening rule is folded into the premise, so the head need only lie
// below the capability's source label (and the next label below its target);
// the result keeps the capability's target as its new head, which is the
// least policy any weakened-then-rewritten variant can reach.
static std::vector<Policy> rewrite_steps(const std::vector<RelabelCapability>& caps, const Policy& p) {
    std::vector<Policy> out;
    if (p.labels.empty()) return out;
    for (const auto& cap : caps) {
        if (!label_leq(p.labels.front(), cap.from)) continue;
        Policy rest = p.tail();
        if (!rest.labels.empty()) {
            if (!label_leq(rest.labels.front(), cap.to)) continue;
            out.push_back(Policy::cons(cap.to, rest.tail()));
        } else if (rest.term == Terminal::Bottom) {
            out.push_back(Policy::cons(cap.to, Policy::bottom()));
        }
    }
    return out;
}

static bool policy_less(const Policy& a, const Policy& b) {
    auto key = [](const Policy& p) {
        std::string k;
        for (const auto& l : p.labels) k += to_string(l) + "::";
        k += p.term == Terminal::Top ? "T" : (p.term == Terminal::Bottom ? "B" : "U");
        return k;
    };
    return key(a) < key(b);
}

std::vector<Policy> rewrite_closure(const std::vector<RelabelCapability>& caps, const Policy& p) {
    std::set<Policy, bool (*)(const Policy&, const Policy&)> seen(policy_less);
    std::deque<Policy> queue{p};
    seen.insert(p);
    while (!queue.empty()) {
        Policy cur = queue.front();
        queue.pop_front();
        for (auto& next : rewrite_steps(caps, cur))
            if (seen.insert(next).second) queue.push_back(next);
    }
    return {seen.begin(), seen.end()};
}

bool rewrites_to(const std::vector<RelabelCapability>& caps, const Policy& p, const Policy& q) {
    reject_unlabeled(p, q, "rewrites_to");
    for (const auto& r : rewrite_closure(caps, p))
        if (policy_leq(r, q)) return true;
    return false;
}

bool in_high(const Policy& attacker, const std::vector<RelabelCapability>& caps, const Policy& p) {
    reject_unlabeled(attacker, p, "in_high");
    for (const auto& r : rewrite_closure(caps, p))
        if (policy_leq(r, attacker)) return false;
    return true;
}

static std::string to_string(const SecrecyTag& t) {
    switch (t.kind) {
        case TagKind::Bottom: return "botS";
        case TagKind::Top: return "topS";
        default: return t.atom;
    }
}

static std::string to_string(const IntegrityTag& t) {
    switch (t.kind) {
        case TagKind::Bottom: return "botI";
        case TagKind::Top: return "topI";
        default: return t.atom;
    }
}

std::string to_string(const Label& l) {
    return "(" + to_string(l.secrecy) + "," + to_string(l.integrity) + ")";
}

std::string to_string(const Policy& p) {
    std::string s;
    for (const auto& l : p.labels) s += to_string(l) + "::";
    switch (p.term) {
        case Terminal::Top: return s + "top";
        case Terminal::Bottom: return s + "bot";
        default: return s + "U";
    }
}

}  // namespace fln
