#include <math.h>
#include <stdio.h>
#include <string.h>

#include "curvscape.h"

#define CHECK(cond)                                             \
  do {                                                          \
    if (!(cond)) {                                              \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,   \
              #cond, cs_last_error());                          \
      return 1;                                                 \
    }                                                           \
  } while (0)

int main(void) {
  CsGraph *g = NULL;
  CsEdgeFunction *f = NULL;
  CsDiagram *d = NULL;
  CsGraph *missing = NULL;
  CsPipelineConfig cfg = cs_pipeline_config_default();
  size_t u, v, i;
  double value, birth, death;

  CHECK(cs_graph_named("k3", &g) == CS_STATUS_OK);
  CHECK(cs_graph_edge_count(g) == 3);

  cfg.kind = CS_CURVATURE_FRC;
  CHECK(cs_curvature(g, &cfg, &f) == CS_STATUS_OK);
  for (i = 0; i < cs_edge_function_len(f); i++) {
    CHECK(cs_edge_function_get(f, i, &u, &v, &value) == CS_STATUS_OK);
    CHECK(value == 3.0);
  }

  CHECK(cs_diagram(g, f, &d) == CS_STATUS_OK);
  CHECK(cs_diagram_len(d, 1) == 1);
  CHECK(cs_diagram_pair(d, 1, 0, &birth, &death) == CS_STATUS_OK);
  CHECK(birth == 3.0 && isinf(death));

  CHECK(cs_graph_named("nope", &missing) == CS_STATUS_INPUT);
  CHECK(missing == NULL);
  CHECK(strstr(cs_last_error(), "nope") != NULL);

  cs_diagram_free(d);
  cs_edge_function_free(f);
  cs_graph_free(g);
  printf("ok %s\n", cs_version());
  return 0;
}
