// C-subset frontend: lexer, pragma directive parser, recursive-descent parser
// with opaque-region preservation, annotation binding, and include resolution.
#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fln/diag.hpp"

namespace fln {

// ------------------------------------------------------------------ errors --

struct FrontendError : std::runtime_error {
    DiagCode code;
    SourceLoc loc;
    FrontendError(DiagCode c, SourceLoc l, const std::string& msg)
        : std::runtime_error(msg), code(c), loc(std::move(l)) {}
};

// ------------------------------------------------------------------ tokens --

struct Token {
    enum class Kind { Ident, Number, StringLit, CharLit, Punct, Preproc, End };
    Kind kind = Kind::End;
    std::string text;   // Preproc: the whole logical line including '#'
    SourceLoc loc;
    size_t offset = 0;  // byte offset into the original source
};

// Tokenizes the whole source. Comments and whitespace are skipped; a '#' at
// the start of a line captures the full preprocessor line as one token.
std::vector<Token> lex(const std::string& source, const std::string& file);

// ----------------------------------------------------------------- pragmas --

enum class Projection { Secrecy, Integrity, Both };

struct PragmaDirective {
    enum class Kind { Requires, Param, Return };
    Kind kind = Kind::Requires;
    std::optional<int> param_index;                              // Param only
    std::vector<std::pair<std::string, std::string>> field_set;  // Requires only
    std::vector<std::pair<std::string, Projection>> sequence;    // source order
    SourceLoc loc;
    size_t offset = 0, length = 0;  // span of the directive line
};

// Recognizes whether a preprocessor line is one of ours.
bool is_annotation_pragma(const std::string& line);

// Parses one annotation pragma line. Throws FrontendError (SyntaxError, with
// the offending column) on malformed input.
PragmaDirective parse_pragma(const std::string& text, const SourceLoc& at);

// Renders a directive back to its canonical source line.
std::string render_pragma(const PragmaDirective& d);

// --------------------------------------------------------------------- AST --

// A surface C type: qualifiers folded into the base token, pointer depth
// tracked separately. "struct" / "union" prefixes are part of the base.
struct CType {
    std::string base;   // "int", "volatile int", "struct foo", "uint8_t", ...
    int pointers = 0;
    bool is_void = false;

    bool operator==(const CType&) const = default;
};
std::string to_string(const CType& t);

struct CExpr;
using CExprRef = std::shared_ptr<const CExpr>;

struct CInitItem {
    std::string designator;  // empty for positional
    CExprRef value;
};

struct CExpr {
    enum class Kind {
        Ident, IntLit, StringLit, CharLit,
        Unary,     // op in {'-','!','~'} applied to e1
        Bin,       // op2 text, e1 op e2
        Call,      // callee name in name, arguments in args
        Member,    // e1 . name (arrow when is_arrow)
        Index,     // e1 [ e2 ]
        Deref,     // * e1
        AddrOf,    // & e1
        Cast,      // ( ctype ) e1
        InitList,  // { items } — record literal / initializer
    };
    Kind kind = Kind::IntLit;
    std::string name;        // Ident, Call, Member field
    long long num = 0;       // IntLit
    std::string text;        // StringLit / CharLit raw spelling
    char op = 0;             // Unary
    std::string op2;         // Bin operator spelling
    CExprRef e1, e2;
    std::vector<CExprRef> args;
    std::vector<CInitItem> items;
    CType cast_type;         // Cast; also a compound literal's type when named
    bool is_arrow = false;
    SourceLoc loc;
};

std::string to_string(const CExpr& e);

struct CStmt;
using CStmtRef = std::shared_ptr<const CStmt>;

struct CParam {
    CType type;
    std::string name;
    SourceLoc loc;
};

struct CDecl {
    CType type;
    std::string name;
    CExprRef init;                        // optional initializer
    bool is_function = false;
    std::vector<CParam> params;
    bool variadic = false;
    std::vector<CStmtRef> body;           // function definition body ([] if ';')
    bool has_body = false;
    std::vector<PragmaDirective> bound;   // directives attached to this decl
    SourceLoc loc;
    size_t offset = 0, length = 0;
};
using CDeclRef = std::shared_ptr<CDecl>;

struct CStmt {
    enum class Kind { Decl, Assign, If, Return, ExprStmt, Block, Pragma, Opaque };
    Kind kind = Kind::Opaque;
    CDeclRef decl;                 // Decl
    CExprRef lhs, rhs;             // Assign; ExprStmt/Return use rhs
    CExprRef cond;                 // If
    std::vector<CStmtRef> then_body, else_body;   // If / Block (then_body)
    PragmaDirective pragma;        // Pragma
    std::string text;              // Opaque: preserved source slice
    SourceLoc loc;
    size_t offset = 0, length = 0;
};

struct CRecordDef {
    std::string name;
    bool is_union = false;
    std::vector<CParam> fields;
    SourceLoc loc;
    size_t offset = 0, length = 0;
};

struct CTypedefDef {
    CType type;
    std::string name;
    SourceLoc loc;
    size_t offset = 0, length = 0;
};

struct CInclude {
    std::string path;
    bool system = false;   // <...> includes are recorded, not traversed
    SourceLoc loc;
    size_t offset = 0, length = 0;
};

struct CTopItem {
    enum class Kind { Decl, Record, Typedef, Include, Pragma, Opaque };
    Kind kind = Kind::Opaque;
    CDeclRef decl;
    CRecordDef record;
    CTypedefDef tdef;
    CInclude include;
    PragmaDirective pragma;
    std::string text;      // Opaque slice
    SourceLoc loc;
    size_t offset = 0, length = 0;
};

struct CUnit {
    std::string path;
    std::string text;                    // original source, for span slicing
    std::vector<CTopItem> items;
    std::vector<PragmaDirective> pragmas;  // every directive, stream order
    std::vector<CInclude> includes;
    std::vector<Diagnostic> diags;       // OpaqueRegion warnings, parse errors
};

// Parses one translation unit. Recoverable problems are reported in
// unit.diags; unparseable regions are preserved as Opaque items.
CUnit parse_unit(const std::string& source, const std::string& file);

// Binds each directive to the declaration it governs (the next declaration in
// the token stream, with only other directives between them). Misbound
// directives produce one diagnostic each; none are dropped silently.
std::vector<Diagnostic> attach_annotations(CUnit& unit);

// ---------------------------------------------------------------- includes --

struct DependencyGraph {
    std::string root;
    std::vector<std::string> order;  // topological: dependencies first
    std::vector<std::pair<std::string, std::string>> edges;  // includer -> included
    std::vector<std::string> system_includes;                // recorded only
};

// Walks project-local quoted includes from the root file. Children are
// visited in lexicographic path order. Throws FrontendError on a missing
// file or an include cycle.
DependencyGraph resolve_includes(const std::string& root_path);

}  // namespace fln
