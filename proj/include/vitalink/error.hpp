#pragma once

#include <stdexcept>
#include <string>

namespace vitalink {

/// Base of every error raised by the library. Callers that only need to know
/// "something in vitalink failed" catch this; everything else catches the
/// specific subclass.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define VITALINK_DEFINE_ERROR(Name)                                            \
    class Name : public Error {                                                \
    public:                                                                    \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {}   \
    }

// wire
VITALINK_DEFINE_ERROR(LengthMismatch);
VITALINK_DEFINE_ERROR(ChecksumMismatch);
VITALINK_DEFINE_ERROR(TruncatedPacket);

// dsp
VITALINK_DEFINE_ERROR(InvalidCutoff);
VITALINK_DEFINE_ERROR(EmptyInput);

// interpreter
VITALINK_DEFINE_ERROR(MalformedReply);
VITALINK_DEFINE_ERROR(ClientUnavailable);

// router
VITALINK_DEFINE_ERROR(UnknownModel);

// orchestrator
VITALINK_DEFINE_ERROR(SchemaViolation);
VITALINK_DEFINE_ERROR(TranscriptionFailure);
VITALINK_DEFINE_ERROR(UnknownDevice);
VITALINK_DEFINE_ERROR(UnknownUser);
VITALINK_DEFINE_ERROR(StorageFailure);

// gateway
VITALINK_DEFINE_ERROR(TransportUnavailable);

// agent tools
VITALINK_DEFINE_ERROR(InvalidCron);
VITALINK_DEFINE_ERROR(NoData);
VITALINK_DEFINE_ERROR(EmptyIndex);

// evaluation
VITALINK_DEFINE_ERROR(MissingFile);
VITALINK_DEFINE_ERROR(SchemaMismatch);
VITALINK_DEFINE_ERROR(InvalidRate);
VITALINK_DEFINE_ERROR(EmptyMask);

// configuration
VITALINK_DEFINE_ERROR(ConfigError);

#undef VITALINK_DEFINE_ERROR

}  // namespace vitalink
