/* cve - chaotic video encryption.
 *
 * C interface to the cipher core. Handles are opaque, every call returns a
 * status code, and string/CSV results are heap buffers released with
 * cve_string_free(). Thread safety: a cve_cipher handle must be driven from
 * one thread at a time; distinct handles are independent.
 */
#ifndef CVE_H
#define CVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CVE_API __declspec(dllexport)
#else
#define CVE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cve_status {
  CVE_OK = 0,
  CVE_ERROR_INVALID_ARGUMENT = 1,
  CVE_ERROR_BAD_KEY = 2,
  CVE_ERROR_IO = 3,
  CVE_ERROR_BAD_FORMAT = 4,
  CVE_ERROR_MISMATCH = 5,
  CVE_ERROR_INTERNAL = 6
} cve_status;

typedef enum cve_map_kind {
  CVE_MAP_PLCM = 0,
  CVE_MAP_LASM = 1
} cve_map_kind;

CVE_API const char* cve_version(void);

/* Static description of a status code. */
CVE_API const char* cve_status_message(cve_status status);

/* Detail for the most recent failure on this thread; empty string if none. */
CVE_API const char* cve_last_error(void);

CVE_API void cve_string_free(char* s);

/* --- keys ------------------------------------------------------------ */

/* Writes the canonical hex key line (NUL terminated) for a fresh key drawn
 * from OS entropy. PLCM keys need 67 bytes of capacity, LASM keys 51. */
CVE_API cve_status cve_key_generate(cve_map_kind kind, char* hex_out,
                                    size_t hex_cap);

/* Validates a hex key and reports its map kind. kind_out may be NULL. */
CVE_API cve_status cve_key_validate(const char* key_hex,
                                    cve_map_kind* kind_out);

/* --- streaming cipher handle ----------------------------------------- */

typedef struct cve_cipher cve_cipher;

/* workers must divide the frame side of every frame passed in. rounds >= 1.
 * parallel != 0 runs one thread per worker, otherwise the same schedule is
 * executed on the calling thread (bit-identical output). */
CVE_API cve_status cve_cipher_create(const char* key_hex, uint32_t workers,
                                     uint32_t rounds, int parallel,
                                     cve_cipher** out);
CVE_API void cve_cipher_destroy(cve_cipher* cipher);

/* In-place on a side*side*3 interleaved RGB buffer. Frames are consumed in
 * order: the k-th call on a handle binds to frame index k, for encryption
 * and decryption alike. */
CVE_API cve_status cve_cipher_encrypt_frame(cve_cipher* cipher,
                                            uint8_t* pixels, uint32_t side);
CVE_API cve_status cve_cipher_decrypt_frame(cve_cipher* cipher,
                                            uint8_t* pixels, uint32_t side);

/* Confusion seeds drawn so far (one per processed frame). */
CVE_API cve_status cve_cipher_seeds_drawn(const cve_cipher* cipher,
                                          uint64_t* out);

/* --- file pipelines --------------------------------------------------- */

typedef struct cve_io_options {
  uint32_t workers;    /* 0 -> 8 */
  uint32_t rounds;     /* 0 -> 5 */
  int serial;          /* nonzero -> single-lane schedule */
  uint16_t fps;        /* 0 -> 20; recorded in the container */
  uint32_t raw_width;  /* nonzero -> input is raw RGB24 of these dims */
  uint32_t raw_height;
} cve_io_options;

/* Input: P6 file, directory of P6 frames, or raw RGB24 (see raw_width).
 * Output: CVE1 container. */
CVE_API cve_status cve_encrypt_file(const char* key_hex,
                                    const cve_io_options* io,
                                    const char* in_path, const char* out_path);

typedef enum cve_out_format {
  CVE_OUT_AUTO = 0,
  CVE_OUT_PPM = 1,
  CVE_OUT_RAW = 2
} cve_out_format;

/* Input: CVE1 container. workers/rounds of 0 follow the header; explicit
 * values must match it. Single frame -> one P6 file; several frames -> a
 * directory of P6 files or a raw RGB24 stream. */
CVE_API cve_status cve_decrypt_file(const char* key_hex,
                                    const cve_io_options* io,
                                    cve_out_format format,
                                    const char* in_path, const char* out_path);

/* --- statistical analysis --------------------------------------------- */

typedef struct cve_analyze_options {
  const char* input;   /* P6 or CVE1 */
  const char* second;  /* optional same-size image for NPCR/UACI */
  uint32_t frame_index;  /* frame to take from a container */
  uint32_t second_frame_index;
  uint32_t samples;    /* adjacent-pair samples per direction, 0 -> 20000 */
  uint64_t seed;       /* sampling seed */
  int csv;             /* nonzero -> CSV, else key=value report */
} cve_analyze_options;

CVE_API cve_status cve_analyze(const cve_analyze_options* options,
                               char** text_out);

/* Salt-and-pepper noise over round(rate * side^2) distinct pixels. Accepts a
 * P6 image or a CVE1 container (every frame, seed offset by frame index). */
CVE_API cve_status cve_add_noise_file(const char* in_path,
                                      const char* out_path, double rate,
                                      uint64_t seed);

typedef struct cve_crop_block {
  uint32_t x;     /* column of the upper-left corner */
  uint32_t y;     /* row of the upper-left corner */
  uint32_t side;
  uint8_t fill;   /* 0x00 or 0xFF */
} cve_crop_block;

CVE_API cve_status cve_crop_file(const char* in_path, const char* out_path,
                                 const cve_crop_block* blocks,
                                 size_t block_count);

/* Raw generator bytes for external statistical suites. The byte budget is
 * split across the workers derived from the key. */
CVE_API cve_status cve_nist_export(const char* key_hex, uint32_t workers,
                                   uint64_t byte_count, const char* out_path);

/* --- benchmarks -------------------------------------------------------- */

typedef struct cve_bench_bytegen_options {
  const char* key_hex;          /* NULL -> fresh key of map_kind */
  cve_map_kind map_kind;
  const uint32_t* worker_counts;
  size_t worker_count_len;      /* 0 -> {1,2,4,8} */
  uint64_t iterations;          /* map iterations in total, 0 -> 50000000 */
} cve_bench_bytegen_options;

CVE_API cve_status cve_bench_bytegen(const cve_bench_bytegen_options* options,
                                     char** csv_out);

typedef struct cve_bench_phases_options {
  const char* key_hex;
  cve_map_kind map_kind;
  uint32_t side;     /* 0 -> 960 */
  uint32_t workers;  /* 0 -> 8 */
  uint32_t rounds;   /* 0 -> 5 */
  uint32_t images;   /* 0 -> 100 */
  int serial;
} cve_bench_phases_options;

CVE_API cve_status cve_bench_phases(const cve_bench_phases_options* options,
                                    char** csv_out);

typedef struct cve_bench_video_options {
  const char* key_hex;
  cve_map_kind map_kind;
  const uint32_t* sides;
  size_t side_len;   /* 0 -> {96,192,288,384,480,576,672,768} */
  uint32_t workers;  /* 0 -> 8 */
  uint32_t rounds;   /* 0 -> 5 */
  uint32_t frames;   /* 0 -> 600 */
  uint16_t fps;      /* 0 -> 20; realtime_ok means mean <= 1000/fps ms */
  int serial;
} cve_bench_video_options;

CVE_API cve_status cve_bench_video(const cve_bench_video_options* options,
                                   char** csv_out);

typedef struct cve_sweep_options {
  const char* key_hex;
  cve_map_kind map_kind;
  const char* input;    /* P6 plain image; NULL -> synthetic */
  uint32_t synth_side;  /* 0 -> 512 */
  uint32_t workers;     /* 0 -> 1 */
  uint32_t max_rounds;  /* 0 -> 10 */
  uint64_t seed;
} cve_sweep_options;

/* Per-round NPCR/UACI under a one-byte plaintext change (diffusion rounds
 * only) and plain-vs-scrambled correlation (confusion rounds only). */
CVE_API cve_status cve_sweep_rounds(const cve_sweep_options* options,
                                    char** csv_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CVE_H */
