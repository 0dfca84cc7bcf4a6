#include <stdio.h>
#include "mdist.h"

int main(void) {
    MdistPresentation *a = NULL, *b = NULL;
    char *d = NULL;
    if (mdist_presentation_parse("fpres v1\nfield 2\ngenerators 1\n0 0\nrelations 0\n", &a) != MDIST_STATUS_OK)
        return 1;
    if (mdist_presentation_parse("fpres v1\nfield 2\ngenerators 1\n1 1\nrelations 0\n", &b) != MDIST_STATUS_OK)
        return 1;
    if (mdist_matching_distance(a, b, 0, &d) != MDIST_STATUS_OK) {
        fprintf(stderr, "%s\n", mdist_last_error_message());
        return 1;
    }
    printf("%s\n", d);
    mdist_string_free(d);
    mdist_presentation_free(a);
    mdist_presentation_free(b);
    return 0;
}
