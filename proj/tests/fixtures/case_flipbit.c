typedef int OblivBit;
#pragma param needsFlipping:secrecy
void __obliv_c__flipBit(OblivBit *src);
#pragma param(2) needsFlipping:secrecy
void sub_circuit(OblivBit *signA, OblivBit *signB) {
    __obliv_c__flipBit(signA);
}
// expect: 6 ArgPointerMismatch
