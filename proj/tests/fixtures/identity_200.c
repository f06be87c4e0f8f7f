int helper0(int a, int b) {
    int c;
    c = a + b + 0;
    return c;
}

int helper1(int a, int b) {
    int c;
    c = a + b + 1;
    return c;
}

int helper2(int a, int b) {
    int c;
    c = a + b + 2;
    return c;
}

int helper3(int a, int b) {
    int c;
    c = a + b + 3;
    return c;
}

int helper4(int a, int b) {
    int c;
    c = a + b + 4;
    return c;
}

int helper5(int a, int b) {
    int c;
    c = a + b + 5;
    return c;
}

int helper6(int a, int b) {
    int c;
    c = a + b + 6;
    return c;
}

int helper7(int a, int b) {
    int c;
    c = a + b + 7;
    return c;
}

int helper8(int a, int b) {
    int c;
    c = a + b + 8;
    return c;
}

int helper9(int a, int b) {
    int c;
    c = a + b + 9;
    return c;
}

int helper10(int a, int b) {
    int c;
    c = a + b + 10;
    return c;
}

int helper11(int a, int b) {
    int c;
    c = a + b + 11;
    return c;
}

int helper12(int a, int b) {
    int c;
    c = a + b + 12;
    return c;
}

int helper13(int a, int b) {
    int c;
    c = a + b + 13;
    return c;
}

int helper14(int a, int b) {
    int c;
    c = a + b + 14;
    return c;
}

int helper15(int a, int b) {
    int c;
    c = a + b + 15;
    return c;
}

int helper16(int a, int b) {
    int c;
    c = a + b + 16;
    return c;
}

int helper17(int a, int b) {
    int c;
    c = a + b + 17;
    return c;
}

int helper18(int a, int b) {
    int c;
    c = a + b + 18;
    return c;
}

int helper19(int a, int b) {
    int c;
    c = a + b + 19;
    return c;
}

int helper20(int a, int b) {
    int c;
    c = a + b + 20;
    return c;
}

int helper21(int a, int b) {
    int c;
    c = a + b + 21;
    return c;
}

int helper22(int a, int b) {
    int c;
    c = a + b + 22;
    return c;
}

int helper23(int a, int b) {
    int c;
    c = a + b + 23;
    return c;
}

int helper24(int a, int b) {
    int c;
    c = a + b + 24;
    return c;
}

int helper25(int a, int b) {
    int c;
    c = a + b + 25;
    return c;
}

int helper26(int a, int b) {
    int c;
    c = a + b + 26;
    return c;
}

int helper27(int a, int b) {
    int c;
    c = a + b + 27;
    return c;
}

int helper28(int a, int b) {
    int c;
    c = a + b + 28;
    return c;
}

int helper29(int a, int b) {
    int c;
    c = a + b + 29;
    return c;
}

int helper30(int a, int b) {
    int c;
    c = a + b + 30;
    return c;
}

int helper31(int a, int b) {
    int c;
    c = a + b + 31;
    return c;
}

int helper32(int a, int b) {
    int c;
    c = a + b + 32;
    return c;
}

int tail(void) {
    return 0;
}
