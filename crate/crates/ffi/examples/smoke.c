#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "pochette.h"

static const char *S4 =
    "{\"name\":\"S4\",\"one_handles\":[\"c1\"],"
    "\"two_handles\":[{\"id\":\"u1\",\"framing\":0},"
    "{\"id\":\"k1\",\"framing\":0,\"linking\":{\"c1\":1},\"meridian\":true}],"
    "\"n3\":1,\"n4\":1}";

#define CHECK(call)                                                         \
  do {                                                                      \
    PchStatus st = (call);                                                  \
    if (st != PCH_STATUS_OK) {                                              \
      fprintf(stderr, "%s -> %d: %s\n", #call, (int)st,                     \
              pch_last_error_message());                                    \
      return 1;                                                             \
    }                                                                       \
  } while (0)

int main(void) {
  char *word = NULL;
  CHECK(pch_word(3, 2, 0, &word));
  printf("word %s\n", word);
  pch_string_free(word);

  PchDiagram *d = NULL;
  CHECK(pch_diagram_from_json(S4, &d));
  bool sphere = false;
  CHECK(pch_diagram_is_homology_sphere(d, &sphere));
  printf("sphere %d\n", (int)sphere);

  char *cert = NULL;
  CHECK(pch_surgery_certificate(d, "c1,u1", 5, 2, 1, NULL, PCH_MODE_DIAGRAM, &cert));
  printf("z5 %d\n", strstr(cert, "\"(Z, Z_5, ?, ?, Z)\"") != NULL);
  pch_string_free(cert);
  pch_diagram_free(d);

  PchStatus bad = pch_word(2, 4, 0, &word);
  printf("bad %d\n", (int)bad);
  return 0;
}
