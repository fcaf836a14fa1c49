#include "bhlab/bitmap.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <limits>

#include "bhlab/errors.hpp"

namespace bhlab {

Bitmap::Bitmap(std::uint64_t lo, std::uint64_t hi, bool value)
    : lo_(lo), size_(hi >= lo ? hi - lo + 1 : 0) {
  words_.assign((size_ + 63) / 64, value ? ~std::uint64_t{0} : 0);
  if (value && (size_ & 63)) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
}

std::uint64_t Bitmap::count() const noexcept {
  std::uint64_t total = 0;
  for (auto w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

std::uint64_t Bitmap::count(std::uint64_t a, std::uint64_t b) const noexcept {
  if (size_ == 0) return 0;
  a = std::max(a, lo_);
  b = std::min(b, hi());
  if (a > b) return 0;
  std::uint64_t i = a - lo_;
  const std::uint64_t j = b - lo_;
  std::uint64_t total = 0;
  while (i <= j && (i & 63)) total += (words_[i >> 6] >> (i & 63)) & 1u, ++i;
  while (i + 63 <= j) total += std::popcount(words_[i >> 6]), i += 64;
  while (i <= j) total += (words_[i >> 6] >> (i & 63)) & 1u, ++i;
  return total;
}

std::vector<std::uint8_t> Bitmap::to_bytes() const {
  std::vector<std::uint8_t> out((size_ + 7) / 8, 0);
  for (std::size_t b = 0; b < out.size(); ++b)
    out[b] = static_cast<std::uint8_t>(words_[b / 8] >> (8 * (b % 8)));
  return out;
}

namespace {

template <class T>
void put_le(std::vector<std::uint8_t>& out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(v) >> (8 * i)));
}

template <class T>
T get_le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return static_cast<T>(v);
}

}  // namespace

void write_bitmap_file(const std::filesystem::path& path, const Bitmap& bits) {
  if (bits.empty()) throw DomainError("cannot write an empty bitmap");
  if (bits.hi() - bits.lo() > std::numeric_limits<std::uint32_t>::max())
    throw RangeTooLarge("bitmap span does not fit the 32-bit header field");
  std::vector<std::uint8_t> header;
  header.reserve(16);
  header.push_back('B');
  header.push_back('H');
  put_le<std::uint16_t>(header, kBitmapFormatVersion);
  put_le<std::uint64_t>(header, bits.lo());
  put_le<std::uint32_t>(header, static_cast<std::uint32_t>(bits.hi() - bits.lo()));
  const auto body = bits.to_bytes();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
  out.write(reinterpret_cast<const char*>(body.data()), static_cast<std::streamsize>(body.size()));
  if (!out) throw Error("failed writing " + path.string());
}

Bitmap read_bitmap_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::array<std::uint8_t, 16> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in.gcount() != 16 || header[0] != 'B' || header[1] != 'H')
    throw ParseError(path.string() + ": not a bitmap file");
  if (get_le<std::uint16_t>(header.data() + 2) != kBitmapFormatVersion)
    throw ParseError(path.string() + ": unsupported bitmap version");
  const auto lo = get_le<std::uint64_t>(header.data() + 4);
  const auto span = get_le<std::uint32_t>(header.data() + 12);
  Bitmap bits(lo, lo + span);
  std::vector<std::uint8_t> body((bits.size() + 7) / 8);
  in.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(body.size()));
  if (static_cast<std::size_t>(in.gcount()) != body.size())
    throw ParseError(path.string() + ": truncated bitmap body");
  auto words = bits.words();
  for (std::size_t b = 0; b < body.size(); ++b)
    words[b / 8] |= std::uint64_t{body[b]} << (8 * (b % 8));
  return bits;
}

}  // namespace bhlab
