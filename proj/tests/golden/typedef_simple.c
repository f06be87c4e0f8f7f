typedef struct {int d;} __fln__l1S_l2S_int;
