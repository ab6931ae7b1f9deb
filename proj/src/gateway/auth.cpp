#include "vitalink/gateway/auth.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/rand.h>

#include <vector>

#include "vitalink/error.hpp"

namespace vitalink::gateway {

namespace {

std::optional<std::vector<unsigned char>> from_hex(const std::string& hex) {
    if (hex.size() % 2) return std::nullopt;
    std::vector<unsigned char> out(hex.size() / 2);
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        return -1;
    };
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int hi = nibble(hex[2 * i]), lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out[i] = static_cast<unsigned char>(hi << 4 | lo);
    }
    return out;
}

std::string pbkdf2(const std::string& passcode, const std::vector<unsigned char>& salt, int iterations) {
    unsigned char out[32];
    if (PKCS5_PBKDF2_HMAC(passcode.data(), static_cast<int>(passcode.size()), salt.data(),
                          static_cast<int>(salt.size()), iterations, EVP_sha256(), sizeof out, out) != 1) {
        throw ConfigError("PBKDF2 failed");
    }
    return to_hex(out, sizeof out);
}

std::string hmac_hex(const std::string& secret, const std::string& message) {
    unsigned char out[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    HMAC(EVP_sha256(), secret.data(), static_cast<int>(secret.size()),
         reinterpret_cast<const unsigned char*>(message.data()), message.size(), out, &len);
    return to_hex(out, len);
}

bool equal_ct(const std::string& a, const std::string& b) {
    return a.size() == b.size() && CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

}  // namespace

std::string to_hex(const unsigned char* data, std::size_t n) {
    static const char* digits = "0123456789abcdef";
    std::string s(2 * n, '0');
    for (std::size_t i = 0; i < n; ++i) {
        s[2 * i] = digits[data[i] >> 4];
        s[2 * i + 1] = digits[data[i] & 0xF];
    }
    return s;
}

PasscodeRecord hash_passcode(const std::string& passcode, int iterations) {
    if (iterations < 1) throw ConfigError("PBKDF2 iterations must be >= 1");
    std::vector<unsigned char> salt(16);
    if (RAND_bytes(salt.data(), static_cast<int>(salt.size())) != 1) throw ConfigError("RAND_bytes failed");
    return {"pbkdf2-sha256$" + std::to_string(iterations) + "$" + pbkdf2(passcode, salt, iterations),
            to_hex(salt.data(), salt.size())};
}

bool verify_passcode(const std::string& passcode, const PasscodeRecord& record) {
    const std::string prefix = "pbkdf2-sha256$";
    if (!record.hash.starts_with(prefix)) return false;
    const auto sep = record.hash.find('$', prefix.size());
    if (sep == std::string::npos) return false;
    int iterations = 0;
    try {
        iterations = std::stoi(record.hash.substr(prefix.size(), sep - prefix.size()));
    } catch (const std::exception&) {
        return false;
    }
    const auto salt = from_hex(record.salt);
    if (!salt || iterations < 1) return false;
    return equal_ct(pbkdf2(passcode, *salt, iterations), record.hash.substr(sep + 1));
}

std::string issue_token(const std::string& secret, const std::string& phone) {
    return "vl1." + to_hex(reinterpret_cast<const unsigned char*>(phone.data()), phone.size()) + "." +
           hmac_hex(secret, "token:" + phone);
}

std::optional<std::string> verify_token(const std::string& secret, const std::string& token) {
    if (!token.starts_with("vl1.")) return std::nullopt;
    const auto dot = token.find('.', 4);
    if (dot == std::string::npos) return std::nullopt;
    const auto phone_bytes = from_hex(token.substr(4, dot - 4));
    if (!phone_bytes || phone_bytes->empty()) return std::nullopt;
    const std::string phone(phone_bytes->begin(), phone_bytes->end());
    if (!equal_ct(hmac_hex(secret, "token:" + phone), token.substr(dot + 1))) return std::nullopt;
    return phone;
}

std::optional<std::string> bearer(const std::string& header) {
    const std::string prefix = "Bearer ";
    if (!header.starts_with(prefix) || header.size() == prefix.size()) return std::nullopt;
    return header.substr(prefix.size());
}

}  // namespace vitalink::gateway
