#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace bhlab {

/// Packed bit set over the inclusive integer range [lo, hi].  Bit (m - lo)
/// is stored at word (m - lo) / 64, bit (m - lo) % 64.
class Bitmap {
 public:
  Bitmap() = default;
  Bitmap(std::uint64_t lo, std::uint64_t hi, bool value = false);

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return lo_ + size_ - 1; }
  std::uint64_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool contains(std::uint64_t m) const noexcept {
    return m >= lo_ && m - lo_ < size_;
  }
  bool test(std::uint64_t m) const noexcept {
    const std::uint64_t i = m - lo_;
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }
  void set(std::uint64_t m) noexcept {
    const std::uint64_t i = m - lo_;
    words_[i >> 6] |= std::uint64_t{1} << (i & 63);
  }
  void reset(std::uint64_t m) noexcept {
    const std::uint64_t i = m - lo_;
    words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
  }
  void assign(std::uint64_t m, bool value) noexcept {
    value ? set(m) : reset(m);
  }

  /// Number of set bits.
  std::uint64_t count() const noexcept;
  /// Set bits with m in [a, b] (clipped to the bitmap range).
  std::uint64_t count(std::uint64_t a, std::uint64_t b) const noexcept;

  std::span<std::uint64_t> words() noexcept { return words_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// Little-endian packed bytes: bit i lives in byte i / 8 at position i % 8.
  std::vector<std::uint8_t> to_bytes() const;

  friend bool operator==(const Bitmap& a, const Bitmap& b) noexcept {
    return a.lo_ == b.lo_ && a.size_ == b.size_ && a.words_ == b.words_;
  }

 private:
  std::uint64_t lo_ = 0;
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Bitmap file: 16-byte header followed by the packed bits.
///   bytes 0..1   magic "BH"
///   bytes 2..3   format version (u16 LE, currently 1)
///   bytes 4..11  lo (u64 LE)
///   bytes 12..15 hi - lo (u32 LE)
inline constexpr std::uint16_t kBitmapFormatVersion = 1;

void write_bitmap_file(const std::filesystem::path& path, const Bitmap& bits);
Bitmap read_bitmap_file(const std::filesystem::path& path);

}  // namespace bhlab
