#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "xenomon/analytics.hpp"
#include "xenomon/formats.hpp"
#include "xenomon/store.hpp"

namespace xenomon::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

struct FileIngestReport {
  std::string name;
  formats::FileKind kind = formats::FileKind::events;
  ParseDiagnostics diagnostics;
  store::UpsertCounts upserts;
};

// Parses one export file (zipped or plain) and upserts it. The table is
// taken from the file name. Throws FormatError / IoError.
FileIngestReport ingest_file(store::Store& store, const std::filesystem::path& path);

enum class CaseStudy { kurdi, march2021 };

struct ReplayPlan {
  query::QueryCriteria criteria;
  DateRange range;
  analytics::Granularity timeline_granularity;
};

ReplayPlan replay_plan(CaseStudy study);

// Writes every chart payload of a case study to `dir` and returns the file
// names written, sorted.
std::vector<std::string> replay(const store::Store& store, CaseStudy study, const std::filesystem::path& dir);

// Entry point behind main(); args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace xenomon::cli
