#ifndef HESSFIELD_H
#define HESSFIELD_H

/* C interface to the hessfield pipelines. Jobs go in as JSON text, reports
 * come back as JSON text; every other type stays behind the opaque handle. */

#ifdef __cplusplus
extern "C" {
#endif

#define HF_ABI_VERSION 1

/* Status values mirror the CLI exit codes. */
#define HF_STATUS_OK 0
#define HF_STATUS_INVARIANT 2
#define HF_STATUS_PRECONDITION 3
#define HF_STATUS_PARSE 4
#define HF_STATUS_IO 5

typedef struct hf_result hf_result;

int hf_abi_version(void);

/* Runs the job described by the JSON document. Never returns NULL; the
 * report (with a "status" field) is available even when the job failed.
 * The caller owns the handle and must free it with hf_result_free. */
hf_result* hf_run_job(const char* job_json);

int hf_result_status(const hf_result* r);

/* NUL-terminated JSON report; owned by the handle. */
const char* hf_result_report(const hf_result* r);

/* Human-readable message for failures; empty string on success. */
const char* hf_result_message(const hf_result* r);

void hf_result_free(hf_result* r);

#ifdef __cplusplus
}
#endif

#endif /* HESSFIELD_H */
