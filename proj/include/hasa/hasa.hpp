#ifndef HASA_HASA_HPP
#define HASA_HASA_HPP

#include "hasa/algebra.hpp"
#include "hasa/dtd.hpp"
#include "hasa/error.hpp"
#include "hasa/ha_format.hpp"
#include "hasa/hedge_automaton.hpp"
#include "hasa/horizontal_nfa.hpp"
#include "hasa/post.hpp"
#include "hasa/rewrite.hpp"
#include "hasa/syntax.hpp"
#include "hasa/tree.hpp"
#include "hasa/update_format.hpp"
#include "hasa/xml.hpp"

#endif // HASA_HASA_HPP
