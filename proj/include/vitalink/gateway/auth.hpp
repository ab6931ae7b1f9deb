#pragma once

#include <optional>
#include <string>

namespace vitalink::gateway {

/// PBKDF2-HMAC-SHA256 passcode record "pbkdf2-sha256$<iterations>$<hash hex>"
/// with its random 16-byte salt in hex.
struct PasscodeRecord {
    std::string hash;
    std::string salt;
};

PasscodeRecord hash_passcode(const std::string& passcode, int iterations);
/// Constant-time comparison against a stored record.
bool verify_passcode(const std::string& passcode, const PasscodeRecord& record);

/// Bearer token "vl1.<phone hex>.<HMAC-SHA256(secret, phone) hex>". Tokens
/// carry the phone so a request can be attributed without a lookup table.
std::string issue_token(const std::string& secret, const std::string& phone);
/// The phone a valid token was issued for.
std::optional<std::string> verify_token(const std::string& secret, const std::string& token);

/// Token from an "Authorization: Bearer <token>" header value.
std::optional<std::string> bearer(const std::string& header);

std::string to_hex(const unsigned char* data, std::size_t n);

}  // namespace vitalink::gateway
