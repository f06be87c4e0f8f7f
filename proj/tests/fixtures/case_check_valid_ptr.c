typedef int uint8_t;
typedef int uint16_t;
#pragma param(2) check_valid_ptr:integrity
void copy_do_1(uint16_t tag, uint8_t *do_data, int with_tag);
#pragma return check_valid_ptr:integrity
uint8_t *check_do_ptr(uint8_t *p);
void rw_kdf(uint8_t *do_ptr, uint16_t tag, int with_tag) {
    copy_do_1(tag, do_ptr, with_tag);
}
// expect: 8 ArgPointerMismatch
