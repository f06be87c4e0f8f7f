#pragma requires AlicePriv:secrecy
int balA;
#pragma param AlicePriv:secrecy
void postBalance(int b);
void bankHandler(void) {
    postBalance(balA);
}
