#pragma once

#include <string>
#include <vector>

namespace fln {

struct SourceLoc {
    std::string file;
    int line = 0;
    int col = 0;

    bool valid() const { return line > 0; }
    std::string str() const {
        if (!valid()) return file.empty() ? "<unknown>" : file;
        return file + ":" + std::to_string(line) + ":" + std::to_string(col);
    }
    bool operator==(const SourceLoc&) const = default;
};

enum class Severity { Error, Warning };

// What produced the diagnostic; drives the rendered message template.
enum class DiagCode {
    TypeMismatch,          // generic expected/found mismatch
    AssignMismatch,        // assignment target vs value
    ArgMismatch,           // function argument, non-pointer
    ArgPointerMismatch,    // function argument, pointer type
    PolicyViolation,
    GuardViolation,
    PcViolation,
    CastOnAnnotated,
    PointerArithOnAnnotated,
    AliasMismatch,
    OperatorOnAnnotated,
    VoidReturnAnnotation,
    VariadicAnnotation,
    DanglingDirective,
    KindMismatch,
    SyntaxError,
    ParseError,
    OpaqueRegion,          // preserved-but-unanalyzed source text
    UnsupportedConstruct,
    MissingInclude,
    IncludeCycle,
    BaseTypeMismatch,      // d&e param/return base types differ
    UnresolvedPlaceholder,
    TagMissing,
    WriteFailure,
    ReservedIdentifier,
    RecursiveType,
    UnknownSymbol,
    Internal,
};

const char* diag_code_name(DiagCode c);

struct Diagnostic {
    Severity severity = Severity::Error;
    DiagCode code = DiagCode::TypeMismatch;
    SourceLoc loc;
    std::string message;        // fully rendered message body
    std::string expected;       // type name, when meaningful
    std::string found;
    std::string callee;         // argument mismatches: function and position
    int argno = 0;
    std::vector<std::string> notes;

    static Diagnostic error(DiagCode c, SourceLoc l, std::string msg) {
        Diagnostic d;
        d.code = c;
        d.loc = std::move(l);
        d.message = std::move(msg);
        return d;
    }
    static Diagnostic warning(DiagCode c, SourceLoc l, std::string msg) {
        Diagnostic d = error(c, std::move(l), std::move(msg));
        d.severity = Severity::Warning;
        return d;
    }
};

// Stable ordering for reports: file, line, column, code.
bool diag_before(const Diagnostic& a, const Diagnostic& b);

}  // namespace fln
