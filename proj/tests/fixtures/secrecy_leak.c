#pragma requires AlicePriv:secrecy
int balA;
void postBalance(int b);
void bankHandler(void) {
    postBalance(balA);
}
