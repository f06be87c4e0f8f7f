typedef struct {struct foo d;} __fln__l1S_l2S_foo;
