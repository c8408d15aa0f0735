/*
 * Copyright 2026 The cfp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace cfp
{
/// Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error
{
public:
    using Error::Error;
};

/// An operator produced a non-finite value or could not be evaluated.
class EvaluationError : public Error
{
public:
    using Error::Error;
};

/// Raised when a quantity is undefined because the point is (numerically)
/// fixed by every supported operator.
class AtFixedPointError : public Error
{
public:
    AtFixedPointError() : Error("at-fixed-point") {}
    explicit AtFixedPointError(const std::string& what) : Error(what) {}
};

class ConfigError : public Error
{
public:
    using Error::Error;
};

class LoadError : public Error
{
public:
    using Error::Error;
};
}  // namespace cfp
