__fln__l1S_l2S_foo x = {.f1 = 1, .d = {.f2 = 2}};
