// Copyright 2026 The filreg Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.

#pragma once

#include <stdexcept>
#include <string>

namespace filreg {

// Kept in sync with the FILREG_E_* codes of the C header.
enum class Errc {
  Ok = 0,
  InvalidArgument = 1,
  DomainError = 2,
  UnresolvedContact = 3,
  DegenerateDenominator = 4,
  OutOfRange = 5,
  ClassMismatch = 6,
  NotCanonical = 7,
  ConditionViolated = 8,
  TransientNotDecayed = 9,
  NoCrossing = 10,
  TangentialGraze = 11,
  StepSizeUnderflow = 12,
  NoExit = 13,
  NoRoot = 14,
  LeftWindow = 15,
  SlidingCapture = 16,
  NoReturn = 17,
  MaxRevolutions = 18,
  NoBracket = 19,
  NotConverged = 20,
  NonPositiveQuantity = 21,
  BadValuation = 22,
  ParseError = 23,
  IoError = 24,
  Internal = 25,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace filreg
