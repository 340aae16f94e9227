/* trimark C API.
 *
 * Every fallible call returns a trimark_status; on failure a description is
 * available from trimark_last_error() on the calling thread until the next
 * failing call. Strings and arrays returned through out-pointers are owned by
 * the caller and released with trimark_free(). Handles are not thread-safe;
 * distinct handles may be used from different threads.
 */
#ifndef TRIMARK_H
#define TRIMARK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(TRIMARK_BUILDING_LIBRARY)
#define TRIMARK_API __declspec(dllexport)
#else
#define TRIMARK_API __declspec(dllimport)
#endif
#else
#define TRIMARK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum trimark_status {
  TRIMARK_OK = 0,
  TRIMARK_ERR_INVALID_ARGUMENT = 1,
  TRIMARK_ERR_IO = 2,
  TRIMARK_ERR_PARSE = 3,
  TRIMARK_ERR_DEGENERATE_TRIANGLE = 4,
  TRIMARK_ERR_SINGULAR_MATRIX = 5,
  TRIMARK_ERR_NOT_A_ROTATION = 6,
  TRIMARK_ERR_MALFORMED_THETA = 7,
  TRIMARK_ERR_IMAGE_TOO_SMALL = 8,
  TRIMARK_ERR_DEGENERATE_CONFIGURATION = 9,
  TRIMARK_ERR_GRID_TOO_FINE = 10,
  TRIMARK_ERR_GRID_MISMATCH = 11,
  TRIMARK_ERR_BEHIND_CAMERA = 12,
  TRIMARK_ERR_EMPTY_HISTORY = 13,
  TRIMARK_ERR_NONMONOTONIC_TIMESTAMPS = 14,
  TRIMARK_ERR_MARKER_OUT_OF_FRAME = 15,
  TRIMARK_ERR_MARKER_TOO_SMALL = 16,
  TRIMARK_ERR_MALFORMED_HEADER = 17,
  TRIMARK_ERR_TRUNCATED_DATA = 18,
  TRIMARK_ERR_UNSUPPORTED_MAXVAL = 19,
  TRIMARK_ERR_MALFORMED_DATA = 20,
  TRIMARK_ERR_TRAILING_DATA = 21,
  TRIMARK_ERR_BAD_MAGIC = 22,
  TRIMARK_ERR_DUPLICATE_ID = 23,
  TRIMARK_ERR_MIXED_GRID_SIZE = 24,
  TRIMARK_ERR_BORDER_VIOLATION = 25,
  TRIMARK_ERR_ROTATION_COLLISION = 26,
  TRIMARK_ERR_UNKNOWN_TEMPLATE = 27,
  TRIMARK_ERR_INTERNAL = 99
} trimark_status;

TRIMARK_API const char* trimark_version(void);
TRIMARK_API const char* trimark_status_name(trimark_status status);
TRIMARK_API const char* trimark_last_error(void);
TRIMARK_API void trimark_free(void* p);

/* ---- images ------------------------------------------------------------ */

/* 8-bit, 1 (gray) or 3 (RGB interleaved) channels, row-major. */
typedef struct trimark_image trimark_image;

/* PGM or PPM, binary or ASCII; the channel count follows the file. */
TRIMARK_API trimark_status trimark_image_load(const char* path, trimark_image** out);
TRIMARK_API trimark_status trimark_image_decode(const uint8_t* bytes, size_t len, trimark_image** out);
/* Zero-filled. */
TRIMARK_API trimark_status trimark_image_create(int width, int height, int channels, trimark_image** out);
/* Binary PGM for gray, binary PPM for RGB. */
TRIMARK_API trimark_status trimark_image_save(const trimark_image* img, const char* path);
TRIMARK_API trimark_status trimark_image_encode(const trimark_image* img, uint8_t** bytes, size_t* len);
TRIMARK_API int trimark_image_width(const trimark_image* img);
TRIMARK_API int trimark_image_height(const trimark_image* img);
TRIMARK_API int trimark_image_channels(const trimark_image* img);
TRIMARK_API uint8_t* trimark_image_data(trimark_image* img);
/* New RGB copy (gray is replicated). */
TRIMARK_API trimark_status trimark_image_to_rgb(const trimark_image* img, trimark_image** out);
TRIMARK_API void trimark_image_destroy(trimark_image* img);

/* ---- template library -------------------------------------------------- */

typedef struct trimark_library trimark_library;

/* tau: matching tolerance the library must stay unambiguous under. */
TRIMARK_API trimark_status trimark_library_load(const char* path, int tau, trimark_library** out);
TRIMARK_API trimark_status trimark_library_parse(const char* text, int tau, trimark_library** out);
TRIMARK_API trimark_status trimark_library_builtin(trimark_library** out);
TRIMARK_API size_t trimark_library_size(const trimark_library* lib);
TRIMARK_API int trimark_library_grid(const trimark_library* lib);
TRIMARK_API int trimark_library_id_at(const trimark_library* lib, size_t index);
TRIMARK_API void trimark_library_destroy(trimark_library* lib);

/* ---- camera, anchor, configuration -------------------------------------- */

typedef struct trimark_camera {
  double fx, fy, cx, cy;
  int width, height;
} trimark_camera;

TRIMARK_API void trimark_camera_default(trimark_camera* out);
TRIMARK_API trimark_status trimark_camera_load(const char* path, trimark_camera* out);
TRIMARK_API trimark_status trimark_camera_parse(const char* json, trimark_camera* out);

typedef enum trimark_anchor_kind {
  TRIMARK_ANCHOR_VERTEX = 0,
  TRIMARK_ANCHOR_CENTROID = 1,
  TRIMARK_ANCHOR_EDGE_MIDPOINT = 2
} trimark_anchor_kind;

typedef struct trimark_anchor {
  int kind; /* trimark_anchor_kind */
  int origin_index;
  int target_vertex;
} trimark_anchor;

/* "v01", "v12", "centroid", "midpoint", or "vertex:i:j", "centroid:j", "edge:k:j". */
TRIMARK_API trimark_status trimark_anchor_parse(const char* text, trimark_anchor* out);

typedef struct trimark_config {
  int threshold; /* 0..255, or -1 for Otsu */
  int connectivity; /* 4 or 8 */
  int min_area;
  int max_area; /* 0: a quarter of the image area */
  double harris_k;
  double window_sigma;
  int nms_radius;
  double min_response;
  int refine_corners; /* boolean */
  int rectify_size;
  int grid;
  int tau;
  trimark_anchor anchor;
  int max_coast;
  double marker_side; /* meters */
} trimark_config;

TRIMARK_API void trimark_config_default(trimark_config* out);
/* Overrides fields of *cfg from a JSON object; unknown keys are an error.
 * "threshold" also accepts "auto", "anchor" takes the anchor_parse syntax. */
TRIMARK_API trimark_status trimark_config_parse_json(const char* json, trimark_config* cfg);
TRIMARK_API trimark_status trimark_config_validate(const trimark_config* cfg);

/* ---- detection and pose ------------------------------------------------ */

typedef struct trimark_detection {
  int frame;
  int marker_id;
  int rotation;
  int hamming;
  double corners[8]; /* x0,y0,...,x3,y3 in quad order */
} trimark_detection;

/* Marker -> camera. rotation is row-major. */
typedef struct trimark_pose {
  double rotation[9];
  double translation[3];
} trimark_pose;

typedef enum trimark_track_status {
  TRIMARK_TRACKED = 0,
  TRIMARK_COASTING = 1,
  TRIMARK_LOST = 2
} trimark_track_status;

typedef struct trimark_pose_record {
  int frame;
  int marker_id;
  int status; /* trimark_track_status */
  int has_pose;
  trimark_pose pose;
  int has_rms;
  double reprojection_rms;
} trimark_pose_record;

/* *out is a malloc'd array (NULL when count is 0). */
TRIMARK_API trimark_status trimark_detect(const trimark_image* img, const trimark_library* lib,
                                          const trimark_config* cfg, int frame, trimark_detection** out,
                                          size_t* count);

/* anchor may be NULL for the default Vertex(0, 1). rms may be NULL. */
TRIMARK_API trimark_status trimark_marker_pose(const trimark_detection* det, const trimark_camera* cam,
                                               double marker_side, const trimark_anchor* anchor,
                                               trimark_pose* out, double* rms);

TRIMARK_API trimark_status trimark_pose_from_rotation_vector(const double rv[3], const double t[3],
                                                             trimark_pose* out);
TRIMARK_API trimark_status trimark_theta_from_pose(const trimark_pose* pose, double theta[16]);
TRIMARK_API trimark_status trimark_pose_from_theta(const double theta[16], trimark_pose* out);

/* ---- tracking ---------------------------------------------------------- */

typedef struct trimark_tracker trimark_tracker;

TRIMARK_API trimark_status trimark_tracker_create(int marker_id, int max_coast, trimark_tracker** out);
/* detection may be NULL for a miss. out->frame is left as 0. */
TRIMARK_API trimark_status trimark_tracker_update(trimark_tracker* tr, const trimark_pose* detection,
                                                  double timestamp, trimark_pose_record* out);
TRIMARK_API int trimark_tracker_status(const trimark_tracker* tr);
TRIMARK_API void trimark_tracker_destroy(trimark_tracker* tr);

/* ---- JSON records ------------------------------------------------------ */

TRIMARK_API trimark_status trimark_detections_to_json(const trimark_detection* dets, size_t count, char** out);
TRIMARK_API trimark_status trimark_detections_from_json(const char* json, trimark_detection** out,
                                                        size_t* count);
TRIMARK_API trimark_status trimark_poses_to_json(const trimark_pose_record* recs, size_t count, char** out);
TRIMARK_API trimark_status trimark_poses_from_json(const char* json, trimark_pose_record** out,
                                                   size_t* count);

/* ---- synthesis and overlay --------------------------------------------- */

/* lib may be NULL for the built-in library. Returns a gray image. */
TRIMARK_API trimark_status trimark_synth_render(const trimark_library* lib, int template_id,
                                                const trimark_pose* pose, const trimark_camera* cam,
                                                double marker_side, int background, double noise_sigma,
                                                uint64_t seed, trimark_image** out);
TRIMARK_API trimark_status trimark_synth_blank(const trimark_camera* cam, int background, double noise_sigma,
                                               uint64_t seed, trimark_image** out);

/* img must be RGB. Draws nothing and fails with BEHIND_CAMERA if any
 * overlay vertex has non-positive depth. */
TRIMARK_API trimark_status trimark_overlay_draw(trimark_image* img, const trimark_pose* pose,
                                                const trimark_camera* cam, double marker_side,
                                                double cube_size);

#ifdef __cplusplus
}
#endif

#endif /* TRIMARK_H */
