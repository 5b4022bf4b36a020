#include <array>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "zipfscale/corpus.hpp"
#include "zipfscale/errors.hpp"

namespace zipfscale {
namespace {

constexpr std::array<char, 4> kCountsMagic{'B', 'G', 'C', '1'};

template <typename T>
T decode_le(const unsigned char* bytes) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

template <typename T>
void encode_le(std::string& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFFu));
  }
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failed on " + path.string());
  return buffer.str();
}

void spill(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed on " + path.string());
}

bool is_text(const std::filesystem::path& path) { return path.extension() == ".txt"; }

}  // namespace

std::vector<std::uint32_t> read_token_file(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  std::vector<std::uint32_t> stream;
  if (is_text(path)) {
    std::istringstream lines(bytes);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(lines, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) {
        stream.push_back(kDocumentBoundary);
        continue;
      }
      std::size_t used = 0;
      unsigned long long id = 0;
      try {
        id = std::stoull(line, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != line.size() || line[0] == '-' || id >= kDocumentBoundary) {
        throw FormatError(path.string() + ":" + std::to_string(line_no) +
                          ": not a token id: '" + line + "'");
      }
      stream.push_back(static_cast<std::uint32_t>(id));
    }
    return stream;
  }
  if (bytes.size() % 4 != 0) {
    throw FormatError(path.string() + ": size " + std::to_string(bytes.size()) +
                      " is not a multiple of 4");
  }
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  stream.resize(bytes.size() / 4);
  for (std::size_t i = 0; i < stream.size(); ++i) {
    stream[i] = decode_le<std::uint32_t>(data + 4 * i);
  }
  return stream;
}

void write_token_file(const std::filesystem::path& path, std::span<const std::uint32_t> stream) {
  std::string bytes;
  if (is_text(path)) {
    for (const std::uint32_t token : stream) {
      if (token != kDocumentBoundary) bytes += std::to_string(token);
      bytes.push_back('\n');
    }
  } else {
    bytes.reserve(stream.size() * 4);
    for (const std::uint32_t token : stream) encode_le(bytes, token);
  }
  spill(path, bytes);
}

BigramCounts read_counts_file(const std::filesystem::path& path) {
  const std::string bytes = slurp(path);
  if (bytes.size() < 16 || std::memcmp(bytes.data(), kCountsMagic.data(), 4) != 0) {
    throw FormatError(path.string() + ": missing BGC1 header");
  }
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  BigramCounts counts;
  counts.vocab_size = decode_le<std::uint32_t>(data + 4);
  const auto triples = decode_le<std::uint64_t>(data + 8);
  if (counts.vocab_size == 0) throw FormatError(path.string() + ": vocab size is 0");
  const std::size_t body = bytes.size() - 16;
  if (triples > body / 16) {
    throw FormatError(path.string() + ": header announces " + std::to_string(triples) +
                      " triples but the file is too short");
  }
  const std::size_t tail = body - triples * 16;
  if (tail % 12 != 0) {
    throw FormatError(path.string() + ": trailing unigram section is truncated");
  }

  const unsigned char* cursor = data + 16;
  for (std::uint64_t i = 0; i < triples; ++i, cursor += 16) {
    const auto context = decode_le<std::uint32_t>(cursor);
    const auto next = decode_le<std::uint32_t>(cursor + 4);
    const auto count = decode_le<std::uint64_t>(cursor + 8);
    if (context >= counts.vocab_size || next >= counts.vocab_size) {
      throw FormatError(path.string() + ": triple " + std::to_string(i) +
                        " has an id outside the vocabulary");
    }
    auto& row = counts.bigram_rows[context];
    if (!row.empty() && row.back().first >= next) {
      throw FormatError(path.string() + ": triples are not sorted at record " + std::to_string(i));
    }
    row.emplace_back(next, count);
  }

  if (tail == 0) {
    // No unigram section: derive from context totals, falling back to the
    // incoming totals for tokens that never start a pair.
    std::map<std::uint32_t, std::uint64_t> incoming;
    for (const auto& [context, row] : counts.bigram_rows) {
      for (const auto& [next, count] : row) {
        counts.unigram[context] += count;
        incoming[next] += count;
      }
    }
    for (const auto& [token, count] : incoming) {
      if (!counts.unigram.contains(token)) counts.unigram[token] = count;
    }
  } else {
    for (std::size_t i = 0; i < tail / 12; ++i, cursor += 12) {
      const auto token = decode_le<std::uint32_t>(cursor);
      const auto count = decode_le<std::uint64_t>(cursor + 4);
      if (token >= counts.vocab_size) {
        throw FormatError(path.string() + ": unigram record " + std::to_string(i) +
                          " has an id outside the vocabulary");
      }
      counts.unigram[token] += count;
    }
  }
  for (const auto& [token, count] : counts.unigram) counts.total_tokens += count;
  return counts;
}

void write_counts_file(const std::filesystem::path& path, const BigramCounts& counts) {
  std::string bytes(kCountsMagic.begin(), kCountsMagic.end());
  encode_le(bytes, counts.vocab_size);
  std::uint64_t triples = 0;
  for (const auto& [context, row] : counts.bigram_rows) triples += row.size();
  encode_le(bytes, triples);
  for (const auto& [context, row] : counts.bigram_rows) {
    for (const auto& [next, count] : row) {
      encode_le(bytes, context);
      encode_le(bytes, next);
      encode_le(bytes, count);
    }
  }
  for (const auto& [token, count] : counts.unigram) {
    encode_le(bytes, token);
    encode_le(bytes, count);
  }
  spill(path, bytes);
}

}  // namespace zipfscale
