// C text emission: policy typedefs, wrapper writer/reader functions,
// member-access and initializer rewriting for annotated record instances,
// per-file generated headers, and reconstruction of the transformed source
// tree under an output directory.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "fln/cfront.hpp"
#include "fln/mapper.hpp"

namespace fln {

// One generated wrapper: a typedef plus a writer/reader conversion pair.
struct HeaderEntry {
    enum class Kind { Scalar, WholeRecord, FieldRecord };
    Kind kind = Kind::Scalar;
    std::string base;     // surface spelling: "int", "struct foo", "foo"
    Policy pol;
    // FieldRecord only: annotated fields with their surface base types.
    std::vector<std::pair<std::string, std::string>> fields;

    std::string name() const;  // generated wrapper identifier
};

// Ordered, duplicate-free list of wrappers needed by the project.
struct HeaderPlan {
    std::vector<HeaderEntry> entries;

    // Appends in first-use order; an already-planned (kind, base, policy,
    // fields) combination is not added again.
    void add(const HeaderEntry& e);
};

struct RewrittenFile {
    std::string path;                   // original file
    std::string text;                   // transformed source
    std::vector<std::string> includes;  // injected include lines
    std::vector<Diagnostic> diags;
    // Wrappers first needed by this file; they land in this file's header.
    // A wrapper already planned by an earlier unit is not repeated (the
    // earlier header is visible through the include chain).
    HeaderPlan contributed;
};

// `typedef struct {<base> d;} <name>;` — the whole base (scalar or record)
// nests inside the wrapper as its single data field.
std::string emit_policy_typedef(const std::string& base, const Policy& p);

// Field-annotated record wrapper: listed fields become labeled wrapper
// fields, the original record nests as `d` for everything else.
std::string emit_field_typedef(const std::string& record, const Policy& p,
                               const std::vector<std::pair<std::string, std::string>>& fields);

// `<N> <N>_w(<base> x)` wrapping into the typedef and `<base> <N>_r(<N> x)`
// projecting back out; bodies construct/project the `d` field.
std::string emit_relabel_fns(const std::string& base, const Policy& p);

// Per-symbol layout for rewriting uses of annotated record instances.
struct InstanceLayout {
    bool whole = false;                  // whole instance annotated: every
                                         // field routes through `d`
    std::vector<std::string> annotated;  // field-annotated: these stay direct
};

// Rewrites member accesses on annotated instances: annotated fields are
// accessed directly, everything else routes through the nested `d` member.
// `layouts` maps instance symbol to layout. Returns the (possibly shared)
// original node when nothing changed.
CExprRef rewrite_member_access(const CExprRef& e,
                               const std::map<std::string, InstanceLayout>& layouts);

// Splits a designated initializer for an annotated instance: annotated
// fields stay at the top level, the rest nest under `.d`.
CExprRef rewrite_initializer(const CExprRef& init, const InstanceLayout& layout);

// Surface-level feature checks on annotated symbols: casts on annotated
// non-pointers, pointer arithmetic on annotated pointers, aliasing across
// mismatched annotated pointer types, and builtin operators on annotated
// numerics. One diagnostic per violation.
std::vector<Diagnostic> enforce_feature_rules(const CUnit& unit, const SurfaceInfo& surface);

// Include-guarded header: every typedef, then every conversion pair, in
// plan order. An empty plan yields a guard-only header.
std::string generate_header(const HeaderPlan& plan, const std::string& header_name);

// Name of the generated header for a source file: `<stem>__fln.h`.
std::string header_name_for(const std::string& path);

// Rewrites one unit: annotated declarations change to wrapper types,
// member accesses and initializers are rewritten, annotation pragma lines
// are removed, and the generated header include is injected when the unit
// contributed wrappers. `ctx` accumulates typedef/record knowledge across
// units (process in dependency order); `plan` collects wrappers first-use.
RewrittenFile rewrite_unit(const CUnit& unit, SurfaceCtx& ctx, HeaderPlan& plan);

// Writes the transformed tree under `out_dir`, mirroring each input file's
// path relative to the root file's directory, plus one generated header per
// file. Original files are untouched. Returns the written paths; throws
// FrontendError(WriteFailure) when a file cannot be written.
std::vector<std::string> reconstruct_program(const DependencyGraph& graph,
                                             const std::vector<RewrittenFile>& files,
                                             const HeaderPlan& plan,
                                             const std::string& out_dir);

}  // namespace fln
