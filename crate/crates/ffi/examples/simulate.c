/* Build from this directory after `cargo build -p fmq-ffi`:
 *   cc simulate.c -I../include ../../../target/debug/libfmq_ffi.a -lm -lpthread -ldl -o simulate
 */
#include <stdio.h>
#include <stdlib.h>

#include "fmq.h"

int main(int argc, char **argv) {
    const char *preset = argc > 1 ? argv[1] : "fig4";
    FmqConfig *cfg = NULL;
    FmqSimulation *sim = NULL;

    if (fmq_config_preset(preset, &cfg) != FMQ_STATUS_OK) {
        fprintf(stderr, "error: %s\n", fmq_last_error());
        return 2;
    }
    if (fmq_simulate(cfg, &sim) != FMQ_STATUS_OK) {
        fprintf(stderr, "error: %s\n", fmq_last_error());
        fmq_config_free(cfg);
        return 3;
    }

    size_t n = fmq_simulation_len(sim);
    double *coh = malloc(n * sizeof *coh);
    fmq_simulation_copy_column(sim, FMQ_COLUMN_COHERENCE_ABS, coh, n);

    double t_c = 0.0;
    bool found = false;
    fmq_simulation_coherence_time(sim, &t_c, &found);
    printf("fmq %s, %s: %zu samples, |zeta(t_max)| = %.6e\n", fmq_version(), preset, n, coh[n - 1]);
    if (found)
        printf("t_c = %.6f\n", t_c);
    else
        printf("t_c beyond t_max\n");

    free(coh);
    fmq_simulation_free(sim);
    fmq_config_free(cfg);
    return 0;
}
