#include <stdio.h>
#include <string.h>
#include "occur.h"

int main(void) {
    char *json = NULL;
    OccurStatus s = occur_unify("f(X,b)", "f(a,Y)", NULL, &json);
    if (s != OCCUR_STATUS_OK || json == NULL || strstr(json, "{X/a, Y/b}") == NULL) {
        return 10;
    }
    occur_string_free(json);

    OccurProgram *p = NULL;
    s = occur_program_parse("app([],Ys,Ys).\napp([X|Xs],Ys,[X|Zs]) :- app(Xs,Ys,Zs).\n", &p);
    if (s != OCCUR_STATUS_OK) {
        return 11;
    }
    s = occur_derive(p, "app(A,B,[c])", "leftmost", "nsto", NULL, 0, 0, &json);
    if (s != OCCUR_STATUS_OK || strstr(json, "\"answers\"") == NULL) {
        return 12;
    }
    occur_string_free(json);
    occur_program_free(p);

    s = occur_program_parse("p(", &p);
    if (s != OCCUR_STATUS_PARSE_ERROR || occur_last_error_message() == NULL) {
        return 13;
    }
    puts("ok");
    return 0;
}
