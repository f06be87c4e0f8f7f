// Maps annotated C units into the labeled calculus: elaborates pragma
// sequences into policies, turns surface declarations into labeled types,
// converts function bodies to A-normal form with the mandated relabel
// insertions, and registers declassification/endorsement capabilities.
#pragma once

#include <map>
#include <set>

#include "fln/ast.hpp"
#include "fln/cfront.hpp"
#include "fln/polc.hpp"

namespace fln {

// Surface knowledge retained for code emission and feature checking.
struct SurfaceInfo {
    std::map<std::string, CType> globals;          // symbol -> surface type
    std::map<std::string, Policy> policies;         // annotated symbol -> value-level policy
    // Field-annotated record instances: symbol -> (record name, annotated
    // fields with their surface base types, policy).
    struct FieldAnnot {
        std::string record;
        std::vector<std::pair<std::string, std::string>> fields;
        Policy policy;
    };
    std::map<std::string, FieldAnnot> field_annots;
};

struct MappedUnit {
    PolcProgram prog;
    std::vector<RelabelCapability> caps;
    std::vector<Diagnostic> diags;
    SurfaceInfo surface;
};

// Elaborates one pragma label sequence: secrecy atoms pair with the most
// trusted integrity tag, integrity atoms with public secrecy, and the
// unrestricted terminal is appended.
Policy elaborate_policy(const std::vector<std::pair<std::string, Projection>>& seq);

// Shared typedef/record knowledge for surface-type interpretation.
struct SurfaceCtx {
    std::map<std::string, CType> typedefs;
    std::set<std::string> records;

    // Follows typedef chains; returns the underlying type with the original
    // spelling available through the argument.
    CType resolve(const CType& t) const;
};

// Maps a surface type to a labeled type. A null policy yields the unlabeled
// marker everywhere; a policy on a pointer type attaches to the innermost
// pointee (pointer annotations describe the content, not the pointer).
STypeRef map_type(const SurfaceCtx& ctx, const CType& t, const Policy* pol);

// Maps all units (dependency order) into one labeled program.
MappedUnit map_units(const std::vector<const CUnit*>& units);

}  // namespace fln
