typedef struct { __fln__l1S_l2S_int f1; __fln__l1S_l2S_int f2; foo d; } __fln__l1S_l2S_foo;
