#pragma once

#include <cstddef>
#include <memory>
#include <string>

#include "dfbench/evaluator.hpp"

namespace dfbench {

// Response body for one evaluation: test_case, tool, job_id, tp, fp, fn,
// precision, recall, f1, plus "verdicts" for carving.
std::string EvaluationToJson(const Evaluation& evaluation);

struct ServerOptions {
  // Request bodies larger than this are refused with 413.
  std::size_t max_upload_bytes = 64u << 20;
};

// HTTP evaluation service.
//
//   POST /api/v1/string-search/evaluate          JSON or multipart
//   POST /api/v1/deleted-file-recovery/evaluate  JSON
//   POST /api/v1/file-carving/evaluate           multipart
//   POST /api/v1/windows-registry/evaluate       multipart
//   POST /api/v1/sqlite-recovery/evaluate        JSON
//   GET  /api/v1/health
//
// Every request names base_test_case and may give tool and job_id. Errors
// are {"error": <kind>, "message": <text>} with status 404 for an unknown
// test case, 400 for malformed input, 422 for a missing field or a payload
// of the wrong shape, 413 when over the size cap and 500 otherwise.
class ApiServer {
 public:
  ApiServer(Evaluator& evaluator, ServerOptions options = {});
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Binds the socket; port 0 picks a free one. Returns the bound port.
  // Throws InvalidArgument when binding fails.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); call after Bind.
  void Listen();
  void Stop();
  bool IsRunning() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dfbench
