#pragma requires AlicePriv:secrecy then EncodedBal:integrity
int balA;
#pragma param AlicePriv:secrecy
#pragma return EncodedBal:integrity
int encodeA(int x);
#pragma param EncodedBal:integrity
void yao_execA(int x);
void run(void) {
    yao_execA(encodeA(balA));
}
