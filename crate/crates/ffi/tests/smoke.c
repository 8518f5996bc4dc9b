#include <stdio.h>
#include <string.h>

#include "cubelin.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "check failed line %d: %s\n", __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    CubelinMatrix *m = NULL;
    CHECK(cubelin_matrix_example("paper-example", &m) == CUBELIN_STATUS_OK);

    size_t rows = 0, cols = 0;
    CHECK(cubelin_matrix_dim(m, &rows, &cols) == CUBELIN_STATUS_OK);
    CHECK(rows == 4 && cols == 4);

    CubelinCertificate cert;
    CHECK(cubelin_verify(m, &cert) == CUBELIN_STATUS_OK);
    CHECK(cert.trace_condition_holds && cert.rank == 2 && cert.delta == 0 && cert.bound_times_two == 4);

    char *json = NULL;
    CHECK(cubelin_invert(m, 0, &json) == CUBELIN_STATUS_OK);
    CHECK(strstr(json, "\"inverse_degree\":9") != NULL);
    cubelin_string_free(json);
    cubelin_matrix_free(m);

    m = NULL;
    CHECK(cubelin_matrix_parse("[[\"1\",\"2\"],[\"3\"]]", &m) == CUBELIN_STATUS_PARSE_ERROR);
    CHECK(m == NULL);
    CHECK(cubelin_last_error_message() != NULL);

    printf("ok %s\n", cubelin_version());
    return 0;
}
