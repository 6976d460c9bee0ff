#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "satotate/error.hpp"
#include "satotate/numthy/primes.hpp"
#include "satotate/quadforms/htable.hpp"

// Cache layout, all integers little-endian:
//   "STAV" | version u8 | kind u8 | count u64 | count fixed-width records | FNV-1a u64
// The checksum covers every byte before it.
namespace satotate::io {

inline constexpr char cache_magic[4] = {'S', 'T', 'A', 'V'};
inline constexpr std::uint8_t cache_version = 0x01;
inline constexpr std::size_t cache_header_size = 4 + 1 + 1 + 8;

enum class PayloadKind : std::uint8_t { primes = 0x01, class_numbers = 0x02, traces = 0x03 };

inline std::size_t record_size(PayloadKind kind) {
    switch (kind) {
        case PayloadKind::primes: return 16;         // p u64, log p f64
        case PayloadKind::class_numbers: return 16;  // p u64, r u32, H u32
        case PayloadKind::traces: return 32;         // p u64, a i64, b i64, lambda i64
    }
    throw IntegrityError("unknown cache payload kind");
}

struct TraceRecord {
    std::uint64_t p = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t lambda = 0;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

inline std::uint64_t fnv1a(const std::uint8_t* data, std::size_t n) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace detail {

class ByteWriter {
public:
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    std::vector<std::uint8_t>& bytes() { return bytes_; }

private:
    std::vector<std::uint8_t> bytes_;
};

class ByteReader {
public:
    ByteReader(const std::uint8_t* p, std::size_t n) : p_(p), n_(n) {}
    std::uint8_t u8() { return take(1)[0]; }
    std::uint32_t u32() {
        const auto* b = take(4);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }
    std::uint64_t u64() {
        const auto* b = take(8);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }
    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    double f64() { return std::bit_cast<double>(u64()); }

private:
    const std::uint8_t* take(std::size_t k) {
        if (pos_ + k > n_) throw IntegrityError("cache file truncated");
        const auto* out = p_ + pos_;
        pos_ += k;
        return out;
    }
    const std::uint8_t* p_;
    std::size_t n_;
    std::size_t pos_ = 0;
};

inline ByteWriter begin_file(PayloadKind kind, std::uint64_t count) {
    ByteWriter w;
    for (char c : cache_magic) w.u8(static_cast<std::uint8_t>(c));
    w.u8(cache_version);
    w.u8(static_cast<std::uint8_t>(kind));
    w.u64(count);
    return w;
}

inline void finish_file(ByteWriter& w, const std::string& path) {
    w.u64(fnv1a(w.bytes().data(), w.bytes().size()));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ResourceError("cannot open cache file for writing: " + path);
    out.write(reinterpret_cast<const char*>(w.bytes().data()), static_cast<std::streamsize>(w.bytes().size()));
    if (!out) throw ResourceError("failed writing cache file: " + path);
}

}  // namespace detail

/// Raw view of a cache file after header and length checks. The payload is
/// returned even when the checksum fails so callers can locate bad records.
struct CacheContents {
    PayloadKind kind = PayloadKind::primes;
    std::uint64_t count = 0;
    std::vector<std::uint8_t> payload;
    bool checksum_ok = false;
};

inline CacheContents read_cache(const std::string& path, PayloadKind expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot open cache file: " + path);
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < cache_header_size + 8) throw IntegrityError("cache file truncated: " + path);
    if (std::memcmp(bytes.data(), cache_magic, 4) != 0) throw IntegrityError("bad cache magic: " + path);
    if (bytes[4] != cache_version) throw IntegrityError("unsupported cache version: " + path);
    if (bytes[5] != static_cast<std::uint8_t>(expected))
        throw IntegrityError("cache payload kind " + std::to_string(bytes[5]) + " where " +
                             std::to_string(static_cast<int>(expected)) + " expected: " + path);
    CacheContents c;
    c.kind = expected;
    detail::ByteReader header(bytes.data() + 6, 8);
    c.count = header.u64();
    const auto width = record_size(expected);
    if (c.count > (bytes.size() - cache_header_size - 8) / width ||
        cache_header_size + c.count * width + 8 != bytes.size())
        throw IntegrityError("cache record count does not match payload length: " + path);
    const auto body_end = bytes.size() - 8;
    detail::ByteReader trailer(bytes.data() + body_end, 8);
    c.checksum_ok = trailer.u64() == fnv1a(bytes.data(), body_end);
    c.payload.assign(bytes.begin() + static_cast<std::ptrdiff_t>(cache_header_size),
                     bytes.begin() + static_cast<std::ptrdiff_t>(body_end));
    return c;
}

inline std::vector<quadforms::ClassNumberRecord> decode_class_numbers(const CacheContents& c) {
    detail::ByteReader r(c.payload.data(), c.payload.size());
    std::vector<quadforms::ClassNumberRecord> out(c.count);
    for (auto& rec : out) {
        rec.p = r.u64();
        rec.r = r.u32();
        rec.H = r.u32();
    }
    return out;
}

inline std::vector<numthy::PrimeEntry> decode_primes(const CacheContents& c) {
    detail::ByteReader r(c.payload.data(), c.payload.size());
    std::vector<numthy::PrimeEntry> out(c.count);
    for (auto& e : out) {
        e.p = r.u64();
        e.logp = r.f64();
    }
    return out;
}

inline std::vector<TraceRecord> decode_traces(const CacheContents& c) {
    detail::ByteReader r(c.payload.data(), c.payload.size());
    std::vector<TraceRecord> out(c.count);
    for (auto& t : out) {
        t.p = r.u64();
        t.a = r.i64();
        t.b = r.i64();
        t.lambda = r.i64();
    }
    return out;
}

inline void require_checksum(const CacheContents& c, const std::string& path) {
    if (!c.checksum_ok) throw IntegrityError("cache checksum mismatch: " + path);
}

inline void write_primes(const std::string& path, const numthy::PrimeTable& table) {
    auto w = detail::begin_file(PayloadKind::primes, table.size());
    for (const auto& e : table) {
        w.u64(e.p);
        w.f64(e.logp);
    }
    detail::finish_file(w, path);
}

/// The stored primes must be ascending and bounded by `limit`.
inline numthy::PrimeTable read_primes(const std::string& path, std::uint64_t limit) {
    const auto c = read_cache(path, PayloadKind::primes);
    require_checksum(c, path);
    auto entries = decode_primes(c);
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i].p > limit || (i > 0 && entries[i].p <= entries[i - 1].p))
            throw IntegrityError("prime cache out of order or above limit at p=" + std::to_string(entries[i].p));
    return numthy::PrimeTable(limit, std::move(entries));
}

inline void write_class_numbers(const std::string& path, const quadforms::ClassNumberTable& table) {
    const auto records = table.records();
    auto w = detail::begin_file(PayloadKind::class_numbers, records.size());
    for (const auto& rec : records) {
        w.u64(rec.p);
        w.u32(rec.r);
        w.u32(rec.H);
    }
    detail::finish_file(w, path);
}

inline quadforms::ClassNumberTable read_class_numbers(const std::string& path, std::uint64_t limit) {
    const auto c = read_cache(path, PayloadKind::class_numbers);
    require_checksum(c, path);
    return quadforms::ClassNumberTable::from_records(limit, decode_class_numbers(c));
}

inline void write_traces(const std::string& path, const std::vector<TraceRecord>& records) {
    auto w = detail::begin_file(PayloadKind::traces, records.size());
    for (const auto& t : records) {
        w.u64(t.p);
        w.i64(t.a);
        w.i64(t.b);
        w.i64(t.lambda);
    }
    detail::finish_file(w, path);
}

inline std::vector<TraceRecord> read_traces(const std::string& path) {
    const auto c = read_cache(path, PayloadKind::traces);
    require_checksum(c, path);
    return decode_traces(c);
}

}  // namespace satotate::io
