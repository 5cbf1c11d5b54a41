#include "quasiflow/seqio.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace quasiflow {
namespace {

class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path) : path_(path) {
    if (path.extension() == ".gz") {
      gz_ = gzopen(path.c_str(), "rb");
      if (gz_ == nullptr) throw std::runtime_error("cannot open " + path.string());
    } else {
      in_.open(path);
      if (!in_) throw std::runtime_error("cannot open " + path.string());
    }
  }
  ~LineReader() {
    if (gz_ != nullptr) gzclose(gz_);
  }
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  bool next(std::string& line) {
    line.clear();
    if (gz_ == nullptr) {
      if (!std::getline(in_, line)) return false;
    } else {
      char buf[8192];
      bool any = false;
      while (gzgets(gz_, buf, sizeof buf) != nullptr) {
        any = true;
        line.append(buf);
        if (!line.empty() && line.back() == '\n') break;
      }
      if (!any) {
        int err = 0;
        gzerror(gz_, &err);
        if (err != Z_OK && err != Z_STREAM_END) throw std::runtime_error("corrupt gzip stream in " + path_.string());
        return false;
      }
      if (!line.empty() && line.back() == '\n') line.pop_back();
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  gzFile gz_ = nullptr;
};

std::string first_token(const std::string& header) {
  const auto end = header.find_first_of(" \t");
  return header.substr(1, end == std::string::npos ? std::string::npos : end - 1);
}

std::string header_rest(const std::string& header) {
  const auto end = header.find_first_of(" \t");
  if (end == std::string::npos) return {};
  const auto start = header.find_first_not_of(" \t", end);
  return start == std::string::npos ? std::string{} : header.substr(start);
}

std::string strip_mate_suffix(const std::string& id, char mate) {
  if (id.size() >= 2 && id[id.size() - 2] == '/' && id.back() == mate) return id.substr(0, id.size() - 2);
  return id;
}

bool has_mate_suffix(const std::string& id) {
  return id.size() >= 2 && id[id.size() - 2] == '/' && (id.back() == '1' || id.back() == '2');
}

}  // namespace

bool is_dna(std::string_view seq) noexcept {
  return std::all_of(seq.begin(), seq.end(), [](char c) {
    return c == 'A' || c == 'C' || c == 'G' || c == 'T' || c == 'N';
  });
}

std::size_t ReadSet::max_read_length() const {
  std::size_t m = 0;
  for (const auto& p : pairs) m = std::max({m, p.left.size(), p.right.size()});
  return m;
}

std::size_t ReadSet::min_read_length() const {
  if (pairs.empty()) return 0;
  std::size_t m = SIZE_MAX;
  for (const auto& p : pairs) m = std::min({m, p.left.size(), p.right.size()});
  return m;
}

void ReadSet::validate() const {
  if (delta < 0) throw std::invalid_argument("insert-size error must be non-negative");
  for (const auto& p : pairs) {
    if (p.left.empty() || p.right.empty()) throw std::invalid_argument("empty mate in pair " + p.id);
    if (!is_dna(p.left) || !is_dna(p.right)) throw std::invalid_argument("non-DNA character in pair " + p.id);
  }
  if (!pairs.empty() && static_cast<std::size_t>(insert_size) <= max_read_length()) {
    throw std::invalid_argument("insert size must exceed the read length");
  }
}

std::vector<SeqRecord> read_fastx(const std::filesystem::path& path) {
  LineReader reader(path);
  std::vector<SeqRecord> records;
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("malformed record in " + path.string() + " near line " + std::to_string(line_no) + ": " +
                             what);
  };
  // Skip leading blank lines.
  bool have = false;
  while ((have = reader.next(line))) {
    ++line_no;
    if (!line.empty()) break;
  }
  if (!have) return records;
  if (line[0] == '>') {
    SeqRecord cur{first_token(line), {}, {}, header_rest(line)};
    while (reader.next(line)) {
      ++line_no;
      if (line.empty()) continue;
      if (line[0] == '>') {
        records.push_back(std::move(cur));
        cur = SeqRecord{first_token(line), {}, {}, header_rest(line)};
      } else {
        cur.seq += line;
      }
    }
    records.push_back(std::move(cur));
  } else if (line[0] == '@') {
    while (true) {
      SeqRecord rec{first_token(line), {}, {}, header_rest(line)};
      if (!reader.next(rec.seq)) fail("missing sequence line");
      ++line_no;
      std::string plus;
      if (!reader.next(plus) || plus.empty() || plus[0] != '+') fail("missing '+' separator");
      ++line_no;
      if (!reader.next(rec.qual)) fail("missing quality line");
      ++line_no;
      if (rec.qual.size() != rec.seq.size()) fail("sequence and quality lengths differ");
      records.push_back(std::move(rec));
      bool more = false;
      while ((more = reader.next(line))) {
        ++line_no;
        if (!line.empty()) break;
      }
      if (!more) break;
      if (line[0] != '@') fail("expected '@' header");
    }
  } else {
    fail("unrecognised format");
  }
  for (auto& r : records) {
    std::transform(r.seq.begin(), r.seq.end(), r.seq.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  }
  return records;
}

void write_fasta(const std::filesystem::path& path, const std::vector<SeqRecord>& records, std::size_t width) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : records) {
    out << '>' << r.id << (r.description.empty() ? "" : " ") << r.description << '\n';
    if (width == 0) {
      out << r.seq << '\n';
    } else {
      for (std::size_t i = 0; i < r.seq.size(); i += width) out << r.seq.substr(i, width) << '\n';
    }
  }
}

void write_fastq(const std::filesystem::path& path, const std::vector<SeqRecord>& records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& r : records) {
    const std::string qual = r.qual.size() == r.seq.size() ? r.qual : std::string(r.seq.size(), 'I');
    out << '@' << r.id << '\n' << r.seq << "\n+\n" << qual << '\n';
  }
}

ReadSet load_paired_reads(const std::filesystem::path& left_path, const std::filesystem::path& right_path,
                          int insert_size, int delta) {
  auto left = read_fastx(left_path);
  auto right = read_fastx(right_path);
  if (left.size() != right.size()) {
    throw std::runtime_error("pair count mismatch: " + std::to_string(left.size()) + " left vs " +
                             std::to_string(right.size()) + " right records");
  }
  ReadSet reads;
  reads.insert_size = insert_size;
  reads.delta = delta;
  reads.pairs.reserve(left.size());
  for (std::size_t i = 0; i < left.size(); ++i) {
    auto& l = left[i];
    auto& r = right[i];
    std::string id = strip_mate_suffix(l.id, '1');
    if (has_mate_suffix(l.id) && has_mate_suffix(r.id) && id != strip_mate_suffix(r.id, '2')) {
      throw std::runtime_error("mate ids disagree: " + l.id + " vs " + r.id);
    }
    if (l.seq.empty() || r.seq.empty() || !is_dna(l.seq) || !is_dna(r.seq)) {
      ++reads.dropped;
      continue;
    }
    reads.pairs.push_back(ReadPair{std::move(l.seq), std::move(r.seq), std::move(id)});
  }
  reads.validate();
  return reads;
}

void write_paired_reads(const std::filesystem::path& left_path, const std::filesystem::path& right_path,
                        const ReadSet& reads) {
  std::vector<SeqRecord> left;
  std::vector<SeqRecord> right;
  left.reserve(reads.pairs.size());
  right.reserve(reads.pairs.size());
  for (const auto& p : reads.pairs) {
    left.push_back({p.id + "/1", p.left, {}, {}});
    right.push_back({p.id + "/2", p.right, {}, {}});
  }
  write_fastq(left_path, left);
  write_fastq(right_path, right);
}

}  // namespace quasiflow
