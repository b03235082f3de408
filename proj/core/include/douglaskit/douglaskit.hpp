#pragma once

// Convenience umbrella for the whole library.

#include "douglaskit/algebra.hpp"
#include "douglaskit/douglas.hpp"
#include "douglaskit/io.hpp"
#include "douglaskit/lab.hpp"
#include "douglaskit/lemma.hpp"
#include "douglaskit/module.hpp"
#include "douglaskit/sampling.hpp"
#include "douglaskit/tolerance.hpp"
