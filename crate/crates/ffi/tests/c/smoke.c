#include <stdio.h>
#include <string.h>
#include "sumrep.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s\n", #cond); return 1; } } while (0)

int main(void) {
    int64_t values[51];
    for (int i = 0; i <= 50; i++) values[i] = i;
    SumrepSet *set = NULL;
    CHECK(sumrep_set_from_i64(values, 51, &set) == SUMREP_STATUS_OK);
    CHECK(sumrep_set_len(set) == 51);

    uint64_t r = 0;
    CHECK(sumrep_rep_count(set, 2, 10, &r) == SUMREP_STATUS_OK);
    CHECK(r == 6);

    SumrepMode mode = { true, 50 };
    SumrepReport *report = NULL;
    CHECK(sumrep_theorem_run(set, SUMREP_THEOREM_T1, 2, 2, 1, mode, -1, &report) == SUMREP_STATUS_OK);
    CHECK(sumrep_report_passed(report));
    char *json = sumrep_report_to_json(report);
    CHECK(json != NULL && strstr(json, "\"theorem\": \"T1\"") != NULL);
    sumrep_string_free(json);
    sumrep_report_free(report);

    int64_t bad[] = { 3, -1 };
    SumrepSet *other = NULL;
    CHECK(sumrep_set_from_i64(bad, 2, &other) == SUMREP_STATUS_NEGATIVE_ELEMENT);
    CHECK(sumrep_last_error() != NULL);

    sumrep_set_free(set);
    printf("ok %s\n", sumrep_version());
    return 0;
}
