y = x.d.f2 + x.f1;
