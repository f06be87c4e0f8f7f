typedef int uint64_t;
typedef int Pool;
#pragma return valid_gate:(secrecy, integrity)
uint64_t Next_Gate_in_Buffer(Pool *dst);
void Gate_Copy(int a, int b, int c, uint64_t gate, int e);
void run(Pool *P) {
    Gate_Copy(0, 0, 0, Next_Gate_in_Buffer(P), 0);
}
// expect: 7 ArgMismatch
