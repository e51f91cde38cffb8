#include <stdio.h>
#include <string.h>
#include "shadowlab.h"

int main(void) {
    const char *six = "open\n1 0 1\n0 0 0\n1 1 0\n0 3 0\n2 0 2\n1 0 0\n";
    ShadowlabCurve *c = NULL;
    if (shadowlab_curve_parse(six, &c) != SHADOWLAB_STATUS_OK) return 10;
    for (size_t axis = 1; axis <= 3; axis++) {
        ShadowlabTopology t;
        if (shadowlab_curve_classify(c, axis, &t) != SHADOWLAB_STATUS_OK) return 11;
        if (t.classification != SHADOWLAB_CLASSIFICATION_CYCLE) return 12;
    }
    shadowlab_curve_free(c);

    ShadowlabCurve *bad = NULL;
    if (shadowlab_curve_parse("open\n0 0 0\n0 0 0\n", &bad) != SHADOWLAB_STATUS_VALIDATION) return 13;
    char *msg = shadowlab_last_error();
    if (msg == NULL || strlen(msg) == 0) return 14;
    shadowlab_string_free(msg);

    ShadowlabVoxels *s = NULL, *sh = NULL;
    if (shadowlab_sphere_build(1, 8, &s) != SHADOWLAB_STATUS_OK) return 15;
    if (shadowlab_voxels_shadow(s, 1, &sh) != SHADOWLAB_STATUS_OK) return 16;
    size_t b[4], n = 0;
    if (shadowlab_voxels_betti(sh, b, 4, &n) != SHADOWLAB_STATUS_OK) return 17;
    if (n != 3 || b[0] != 1 || b[1] != 0 || b[2] != 0) return 18;
    shadowlab_voxels_free(sh);
    shadowlab_voxels_free(s);
    puts("ok");
    return 0;
}
