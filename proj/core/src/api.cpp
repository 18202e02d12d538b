#include "dfbench/api.hpp"

#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "dfbench/error.hpp"
#include "dfbench/text.hpp"

namespace dfbench {

using nlohmann::json;

namespace {

json MetricsJson(const Evaluation& e) {
  json j = {{"test_case", e.test_case}, {"tool", e.tool},     {"job_id", e.job_id},
            {"tp", e.counts.tp},        {"fp", e.counts.fp},  {"fn", e.counts.fn},
            {"precision", e.metrics.precision}, {"recall", e.metrics.recall},
            {"f1", e.metrics.f1}};
  return j;
}

[[noreturn]] void Missing(const std::string& field) {
  Fail(ErrorKind::kShapeMismatch, "missing field '" + field + "'");
}

// ---- JSON bodies ----

json ParseBody(const httplib::Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) Fail(ErrorKind::kParseError, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    Fail(ErrorKind::kParseError, std::string("invalid JSON: ") + e.what());
  }
}

std::optional<std::string> OptString(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) Fail(ErrorKind::kShapeMismatch, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

RequestInfo InfoFromJson(const json& j) {
  RequestInfo info;
  auto tc = OptString(j, "base_test_case");
  if (!tc || Trim(*tc).empty()) Missing("base_test_case");
  info.test_case = std::string(Trim(*tc));
  info.tool = OptString(j, "tool").value_or("");
  info.job_id = OptString(j, "job_id").value_or("");
  return info;
}

std::optional<Timestamp> OptTime(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (it->is_number_integer()) return Timestamp{it->get<std::int64_t>()};
  if (it->is_string()) {
    if (auto t = ParseTimestamp(it->get<std::string>())) return t;
  }
  Fail(ErrorKind::kShapeMismatch, std::string("'") + key + "' is not a timestamp");
}

std::optional<std::vector<BlockRange>> OptBlocks(const json& j) {
  auto it = j.find("blocks");
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) {
    try {
      return ParseBlockRanges(it->get<std::string>());
    } catch (const Error& e) {
      Fail(ErrorKind::kShapeMismatch, std::string("'blocks': ") + e.what());
    }
  }
  if (!it->is_array()) Fail(ErrorKind::kShapeMismatch, "'blocks' must be a string or an array");
  std::vector<BlockRange> out;
  for (const json& b : *it) {
    if (b.is_number_unsigned()) {
      out.push_back({b.get<std::uint64_t>(), b.get<std::uint64_t>()});
    } else if (b.is_array() && b.size() == 2 && b[0].is_number_unsigned() &&
               b[1].is_number_unsigned() && b[0].get<std::uint64_t>() <= b[1].get<std::uint64_t>()) {
      out.push_back({b[0].get<std::uint64_t>(), b[1].get<std::uint64_t>()});
    } else {
      Fail(ErrorKind::kShapeMismatch, "'blocks' entries must be indices or [start, end] pairs");
    }
  }
  return out;
}

DfrRecoveredFile FileFromJson(const json& j) {
  if (!j.is_object()) Fail(ErrorKind::kShapeMismatch, "each file must be an object");
  DfrRecoveredFile f;
  f.file_name = OptString(j, "file_name");
  if (auto it = j.find("size"); it != j.end() && !it->is_null()) {
    if (!it->is_number_unsigned()) Fail(ErrorKind::kShapeMismatch, "'size' must be a non-negative integer");
    f.size = it->get<std::uint64_t>();
  }
  f.access_time = OptTime(j, "access_time");
  f.modify_time = OptTime(j, "modify_time");
  f.created_time = OptTime(j, "created_time");
  f.blocks = OptBlocks(j);
  return f;
}

DfrRequest DfrFromJson(const json& j) {
  DfrRequest r;
  r.info = InfoFromJson(j);
  if (auto it = j.find("files"); it != j.end()) {
    if (!it->is_array()) Fail(ErrorKind::kShapeMismatch, "'files' must be an array");
    for (const json& f : *it) r.files.push_back(FileFromJson(f));
  } else {
    r.files.push_back(FileFromJson(j));
  }
  return r;
}

std::optional<FileStatus> StatusField(const std::optional<std::string>& v) {
  if (!v || Trim(*v).empty()) return std::nullopt;
  auto s = ParseFileStatus(*v);
  if (!s) Fail(ErrorKind::kShapeMismatch, "unknown file_status '" + *v + "'");
  return s;
}

FssRequest FssFromJson(const json& j) {
  FssRequest r;
  r.info = InfoFromJson(j);
  r.os = OptString(j, "os").value_or("");
  if (Trim(r.os).empty()) Missing("os");
  r.file_status = StatusField(OptString(j, "file_status"));
  if (auto content = OptString(j, "content")) {
    r.lines = SplitReportedLines(*content);
  } else if (auto it = j.find("lines"); it != j.end() && it->is_array()) {
    for (const json& l : *it) {
      if (!l.is_string()) Fail(ErrorKind::kShapeMismatch, "'lines' must contain strings");
      for (auto& s : SplitReportedLines(l.get<std::string>())) r.lines.push_back(std::move(s));
    }
  } else {
    Missing("content");
  }
  return r;
}

SqliteRequest SqliteFromJson(const json& j) {
  SqliteRequest r;
  r.info = InfoFromJson(j);
  r.report = ParseSqliteReport(r.info.test_case, j.dump());
  return r;
}

// ---- multipart bodies ----

std::optional<std::string> FormField(const httplib::Request& req, const std::string& key) {
  auto range = req.files.equal_range(key);
  for (auto it = range.first; it != range.second; ++it) {
    if (it->second.filename.empty()) return it->second.content;
  }
  if (req.has_param(key)) return req.get_param_value(key);
  return std::nullopt;
}

RequestInfo InfoFromForm(const httplib::Request& req) {
  RequestInfo info;
  auto tc = FormField(req, "base_test_case");
  if (!tc || Trim(*tc).empty()) Missing("base_test_case");
  info.test_case = std::string(Trim(*tc));
  info.tool = FormField(req, "tool").value_or("");
  info.job_id = FormField(req, "job_id").value_or("");
  return info;
}

std::vector<const httplib::MultipartFormData*> FileParts(const httplib::Request& req) {
  std::vector<const httplib::MultipartFormData*> parts;
  for (const auto& [name, part] : req.files) {
    if (!part.filename.empty()) parts.push_back(&part);
  }
  return parts;
}

FssRequest FssFromForm(const httplib::Request& req) {
  FssRequest r;
  r.info = InfoFromForm(req);
  r.os = FormField(req, "os").value_or("");
  if (Trim(r.os).empty()) Missing("os");
  r.file_status = StatusField(FormField(req, "file_status"));
  std::optional<std::string> content;
  if (req.has_file("file")) content = req.get_file_value("file").content;
  if (!content) content = FormField(req, "content");
  if (!content) Missing("file");
  r.lines = SplitReportedLines(*content);
  return r;
}

CarvingRequest CarvingFromForm(const httplib::Request& req, std::size_t cap) {
  CarvingRequest r;
  r.info = InfoFromForm(req);
  const auto parts = FileParts(req);
  if (parts.empty()) Fail(ErrorKind::kInvalidArgument, "no carved files were uploaded");
  for (const auto* part : parts) {
    if (part->content.size() > cap) {
      Fail(ErrorKind::kPayloadTooLarge, "part '" + part->filename + "' exceeds the size cap");
    }
    r.files.push_back({BaseName(part->filename),
                       std::vector<std::uint8_t>(part->content.begin(), part->content.end()),
                       std::nullopt});
  }
  return r;
}

RegistryRequest RegistryFromForm(const httplib::Request& req) {
  RegistryRequest r;
  r.info = InfoFromForm(req);
  const auto parts = FileParts(req);
  if (parts.empty()) Missing("file");
  std::istringstream in(parts.front()->content);
  r.rows = ReadRegistryRows(in);
  return r;
}

int StatusFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUnknownTestCase: return 404;
    case ErrorKind::kParseError:
    case ErrorKind::kInvalidArgument:
    case ErrorKind::kNotDecodable:
    case ErrorKind::kNotSqlite:
    case ErrorKind::kTruncated:
      return 400;
    case ErrorKind::kShapeMismatch:
    case ErrorKind::kSchemaViolation:
      return 422;
    case ErrorKind::kPayloadTooLarge:
      return 413;
    default:
      return 500;
  }
}

void SendError(httplib::Response& res, int status, std::string_view kind,
               const std::string& message) {
  res.status = status;
  res.set_content(json{{"error", kind}, {"message", message}}.dump(), "application/json");
}

}  // namespace

std::string EvaluationToJson(const Evaluation& e) {
  json j = MetricsJson(e);
  if (SuiteForTestCase(e.test_case) == Suite::kFileCarving) {
    json verdicts = json::array();
    for (const auto& v : e.verdicts) {
      json item = {{"gt_file", v.gt_file ? json(*v.gt_file) : json(nullptr)},
                   {"carved_file", v.carved_file ? json(*v.carved_file) : json(nullptr)},
                   {"similarity", v.similarity},
                   {"decodable", v.decodable},
                   {"hamming_distance",
                    v.hamming_distance ? json(*v.hamming_distance) : json(nullptr)},
                   {"outcome", CarvingOutcomeName(v.outcome)}};
      verdicts.push_back(std::move(item));
    }
    j["verdicts"] = std::move(verdicts);
  }
  return j.dump();
}

struct ApiServer::Impl {
  Evaluator& evaluator;
  ServerOptions options;
  httplib::Server server;

  Impl(Evaluator& e, ServerOptions o) : evaluator(e), options(o) {}

  template <typename Build>
  void Route(const std::string& path, Build build) {
    server.Post(path, [this, build](const httplib::Request& req, httplib::Response& res) {
      try {
        const Evaluation e = build(req);
        res.status = 200;
        res.set_content(EvaluationToJson(e), "application/json");
      } catch (const Error& err) {
        SendError(res, StatusFor(err.kind()), ErrorKindName(err.kind()), err.what());
      } catch (const std::exception& ex) {
        SendError(res, 500, "Internal", ex.what());
      }
    });
  }

  void Install() {
    server.set_payload_max_length(options.max_upload_bytes);
    server.Get("/api/v1/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"status":"ok"})", "application/json");
    });
    Route("/api/v1/string-search/evaluate", [this](const httplib::Request& req) {
      return evaluator.Evaluate(req.is_multipart_form_data() ? FssFromForm(req)
                                                             : FssFromJson(ParseBody(req)));
    });
    Route("/api/v1/deleted-file-recovery/evaluate", [this](const httplib::Request& req) {
      return evaluator.Evaluate(DfrFromJson(ParseBody(req)));
    });
    Route("/api/v1/file-carving/evaluate", [this](const httplib::Request& req) {
      if (!req.is_multipart_form_data()) {
        Fail(ErrorKind::kInvalidArgument, "carved files must be sent as multipart/form-data");
      }
      return evaluator.Evaluate(CarvingFromForm(req, options.max_upload_bytes));
    });
    Route("/api/v1/windows-registry/evaluate", [this](const httplib::Request& req) {
      if (!req.is_multipart_form_data()) {
        Fail(ErrorKind::kInvalidArgument, "the dump must be sent as multipart/form-data");
      }
      return evaluator.Evaluate(RegistryFromForm(req));
    });
    Route("/api/v1/sqlite-recovery/evaluate", [this](const httplib::Request& req) {
      return evaluator.Evaluate(SqliteFromJson(ParseBody(req)));
    });
    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (!res.body.empty()) return;
      const char* kind = res.status == 413 ? "PayloadTooLarge"
                         : res.status == 404 ? "NotFound"
                                             : "HttpError";
      SendError(res, res.status, kind, httplib::status_message(res.status));
    });
  }
};

ApiServer::ApiServer(Evaluator& evaluator, ServerOptions options)
    : impl_(std::make_unique<Impl>(evaluator, options)) {
  impl_->Install();
}

ApiServer::~ApiServer() { Stop(); }

int ApiServer::Bind(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    Fail(ErrorKind::kInvalidArgument,
         "cannot listen on " + host + ":" + std::to_string(port));
  }
  return bound;
}

void ApiServer::Listen() {
  impl_->server.listen_after_bind();
}

void ApiServer::Stop() {
  if (impl_) impl_->server.stop();
}

bool ApiServer::IsRunning() const { return impl_->server.is_running(); }

}  // namespace dfbench
