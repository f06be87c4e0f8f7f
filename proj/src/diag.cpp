#include "fln/diag.hpp"

#include <tuple>

namespace fln {

const char* diag_code_name(DiagCode c) {
    switch (c) {
        case DiagCode::TypeMismatch: return "TypeMismatch";
        case DiagCode::AssignMismatch: return "AssignMismatch";
        case DiagCode::ArgMismatch: return "ArgMismatch";
        case DiagCode::ArgPointerMismatch: return "ArgPointerMismatch";
        case DiagCode::PolicyViolation: return "PolicyViolation";
        case DiagCode::GuardViolation: return "GuardViolation";
        case DiagCode::PcViolation: return "PcViolation";
        case DiagCode::CastOnAnnotated: return "CastOnAnnotated";
        case DiagCode::PointerArithOnAnnotated: return "PointerArithOnAnnotated";
        case DiagCode::AliasMismatch: return "AliasMismatch";
        case DiagCode::OperatorOnAnnotated: return "OperatorOnAnnotated";
        case DiagCode::VoidReturnAnnotation: return "VoidReturnAnnotation";
        case DiagCode::VariadicAnnotation: return "VariadicAnnotation";
        case DiagCode::DanglingDirective: return "DanglingDirective";
        case DiagCode::KindMismatch: return "KindMismatch";
        case DiagCode::SyntaxError: return "SyntaxError";
        case DiagCode::ParseError: return "ParseError";
        case DiagCode::OpaqueRegion: return "OpaqueRegion";
        case DiagCode::UnsupportedConstruct: return "UnsupportedConstruct";
        case DiagCode::MissingInclude: return "MissingInclude";
        case DiagCode::IncludeCycle: return "IncludeCycle";
        case DiagCode::BaseTypeMismatch: return "BaseTypeMismatch";
        case DiagCode::UnresolvedPlaceholder: return "UnresolvedPlaceholder";
        case DiagCode::TagMissing: return "TagMissing";
        case DiagCode::WriteFailure: return "WriteFailure";
        case DiagCode::ReservedIdentifier: return "ReservedIdentifier";
        case DiagCode::RecursiveType: return "RecursiveType";
        case DiagCode::UnknownSymbol: return "UnknownSymbol";
        case DiagCode::Internal: return "Internal";
    }
    return "Unknown";
}

bool diag_before(const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.loc.file, a.loc.line, a.loc.col, a.code) <
           std::tie(b.loc.file, b.loc.line, b.loc.col, b.code);
}

}  // namespace fln
