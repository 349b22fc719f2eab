#include <math.h>
#include <stdio.h>

#include "qcovmap.h"

#define CHECK(expr)                                                            \
  do {                                                                         \
    if (!(expr)) {                                                             \
      const char *msg = qcm_last_error_message();                              \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #expr,           \
              msg ? msg : "no error");                                         \
      return 1;                                                                \
    }                                                                          \
  } while (0)

int main(void) {
  QcmParams *p = NULL;
  QcmState *s = NULL;
  double entropy = 0.0, expected = 0.0, ppt = 0.0;
  double re[16];

  CHECK(qcm_params_entangling(4, &p) == QCM_STATUS_OK);
  CHECK(qcm_apply_canonical(p, &s) == QCM_STATUS_OK);
  CHECK(qcm_state_entropy(s, &entropy) == QCM_STATUS_OK);
  CHECK(qcm_optimal_entropy(4, &expected) == QCM_STATUS_OK);
  CHECK(fabs(entropy - log(6.0)) < 1e-12 && fabs(entropy - expected) < 1e-12);
  CHECK(qcm_state_ppt_min_eig(s, &ppt) == QCM_STATUS_OK);
  CHECK(fabs(ppt + 0.25) < 1e-12);
  CHECK(qcm_state_copy_entries(s, re, NULL, 4) == QCM_STATUS_BUFFER_TOO_SMALL);
  qcm_state_free(s);
  qcm_params_free(p);

  CHECK(qcm_params_new(1, 0.0, 0.0, 0.0, &p) == QCM_STATUS_INVALID_DIMENSION);
  CHECK(qcm_last_error_message() != NULL);

  printf("ok\n");
  return 0;
}
