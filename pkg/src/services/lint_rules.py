"""
Lint Rules
Surface heuristics for comprehension-impairing text features and
question-writing principles, applied to a question stem
"""

import logging
import re
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from models.feedback import SuggestionKind
from models.finding import (
    ComplexityProfile, Finding, LintConfig, RuleId, SentenceComplexity, Severity
)
from models.questionnaire import SourceSpan, SpanTarget
from utils.lexicon import LexiconSet
from utils.text import Token, normalize, split_sentences, tokenize, tokens_between

logger = logging.getLogger(__name__)

# Words in the top ranks of the frequency list are never flagged
ALWAYS_COMMON_RANK = 200

COORDINATORS = frozenset({'or', 'and'})
ADJECTIVE_SUFFIXES = ('ical', 'al', 'ic', 'ive', 'ous', 'ful', 'ary', 'ent', 'ant', 'ble')
COMPARATIVES = frozenset({'worse', 'better', 'worst', 'best'})
DEMONSTRATIVES = frozenset({'this', 'these', 'those', 'such'})
UNIVERSALS = frozenset({'all', 'every', 'everyone', 'everybody', 'everything',
                        'nobody', 'nothing', 'always', 'never'})
DETERMINERS = frozenset({'the', 'a', 'an', 'this', 'that', 'these', 'those',
                         'my', 'your', 'his', 'her', 'its', 'our', 'their'})
AUXILIARIES = frozenset({'would', 'will', 'do', 'does', 'did', 'can', 'could',
                         'should', 'are', 'is', 'have', 'has'})

_EXEMPLIFICATION_RE = re.compile(r"^(?:\(|such as\b|e\.g\.|for example\b|including\b|like\b)")
_EXEMPLIFICATION_TAIL_RE = re.compile(r"(?:such as|e\.g\.|for example|including)[^,;)?]*")
_PARENTHETICAL_RE = re.compile(r"\([^)]*\)")
_CLAUSE_BREAK_RE = re.compile(r"[,;:.?!]|\bbut\b")

_NUMBER = r"\d+|one|two|three|four|five|six|seven|eight|nine|ten|eleven|twelve"
_UNIT = r"days?|weeks?|months?|years?"
FREQUENCY_QUESTION_RE = re.compile(r"\bhow\s+(?:often|frequently|many\s+times)\b")
REFERENCE_PERIOD_RE = re.compile(
    rf"\b(?:during|in|over|within|for)\s+the\s+(?:last|past|previous|preceding)\s+"
    rf"(?:(?P<count>{_NUMBER})\s+)?(?P<unit>{_UNIT})\b"
    r"|\bin\s+a\s+(?:typical|normal|usual|given|average)\s+(?:day|week|month|year)\b"
    r"|\bper\s+(?:day|week|month|year)\b"
    r"|\b(?:times|once|twice|days|nights|hours|minutes)\s+(?:a|each|every)\s+(?:day|week|month|year)\b"
    r"|\b(?:a|each|every)\s+(?:day|week|month|year)\b(?=\s*(?:[,;:.?!)]|$))"
    r"|\b(?:last|past|this|next)\s+(?:week|month|year)\b"
    r"|\b(?:today|yesterday|since)\b"
    r"|\bin\s+your\s+(?:lifetime|life)\b"
)
LIFETIME_RE = re.compile(r"\bin\s+your\s+(?:lifetime|life)\b|\bever\b")
EXACT_COUNT_RE = re.compile(r"\bhow\s+many\b|\bthe\s+number\s+of\b")
WILL_YOU_RE = re.compile(r"^\s*will\s+you\b")

_NUMBER_VALUES = {
    'one': 1, 'two': 2, 'three': 3, 'four': 4, 'five': 5, 'six': 6, 'seven': 7,
    'eight': 8, 'nine': 9, 'ten': 10, 'eleven': 11, 'twelve': 12,
}
_UNIT_MONTHS = {'day': 1 / 30, 'week': 1 / 4, 'month': 1, 'year': 12}


def _lower(text: str) -> str:
    """Lower-cased, quote-normalized text with unchanged offsets"""
    return normalize(text).lower()


def _finding(rule_id: RuleId, severity: Severity, stem: str, start: int, end: int,
             message: str, hint: Optional[SuggestionKind] = None) -> Finding:
    return Finding(
        rule_id=rule_id,
        severity=severity,
        span=SourceSpan(SpanTarget.STEM, start, end),
        message=message,
        evidence=stem[start:end],
        hint=hint,
    )


def _phrase_matches(text: str, phrases: Iterable[str]) -> List[Tuple[int, int, str]]:
    """Non-overlapping whole-word phrase matches, longest phrase first"""
    lowered = _lower(text)
    taken: List[Tuple[int, int]] = []
    matches = []
    for phrase in phrases:
        for m in re.finditer(rf"(?<![\w'-]){re.escape(phrase)}(?![\w'-])", lowered):
            if any(m.start() < end and start < m.end() for start, end in taken):
                continue
            taken.append((m.start(), m.end()))
            matches.append((m.start(), m.end(), phrase))
    return sorted(matches)


def lemma_candidates(word: str) -> List[str]:
    """The word plus its plausible bases after stripping a regular inflection"""
    candidates = [word]

    def add(base: str):
        if len(base) >= 2 and base not in candidates:
            candidates.append(base)

    if word.endswith('ies') and len(word) > 4:
        add(word[:-3] + 'y')
    if word.endswith('es'):
        add(word[:-2])
    if word.endswith('s') and not word.endswith('ss'):
        add(word[:-1])
    for suffix in ('ed', 'ing'):
        if word.endswith(suffix):
            base = word[:-len(suffix)]
            add(base)
            add(base + 'e')
            if len(base) > 2 and base[-1] == base[-2]:
                add(base[:-1])
    if word.endswith('ily'):
        add(word[:-3] + 'y')
    if word.endswith('ly'):
        add(word[:-2])
    return candidates


def word_rank(word: str, lexicons: LexiconSet) -> Optional[int]:
    """Best frequency rank over the word's lemma candidates"""
    ranks = [lexicons.word_ranks[c] for c in lemma_candidates(word) if c in lexicons.word_ranks]
    return min(ranks) if ranks else None


def _lemma(word: str, lexicons: LexiconSet) -> str:
    for candidate in lemma_candidates(word):
        if candidate in lexicons.word_ranks:
            return candidate
    return word


def _is_acronym(token: Token) -> bool:
    letters = [c for c in token.text if c.isalpha()]
    return len(letters) >= 2 and token.text.isupper()


def _has_expansion(stem: str, token: Token) -> bool:
    """'GDP (gross domestic product)' or 'gross domestic product (GDP)'"""
    after = stem[token.end:].lstrip()
    if after.startswith('('):
        return True
    before = stem[:token.start].rstrip()
    return before.endswith('(') and stem[token.end:].lstrip().startswith(')')


def _is_content_word(token: Token, lexicons: LexiconSet) -> bool:
    return (
        token.norm.isalpha()
        and len(token.norm) >= 3
        and not _is_acronym(token)
        and token.norm not in lexicons.function_words
    )


def _question_sentences(stem: str):
    sentences = split_sentences(stem)
    asked = [s for s in sentences if s.interrogative]
    return asked or sentences


def detect_low_frequency_terms(stem: str, cfg: LintConfig, lexicons: LexiconSet) -> List[Finding]:
    """L1 on rare or unknown content words, N1 on unexpanded acronyms"""
    findings = []
    for token in tokenize(stem):
        if _is_acronym(token):
            if not _has_expansion(stem, token):
                findings.append(_finding(
                    RuleId.N1, Severity.WARNING, stem, token.start, token.end,
                    f"Abbreviation '{token.text}' is not spelled out", SuggestionKind.CLARIFY_TERM,
                ))
            continue

        if not _is_content_word(token, lexicons):
            continue

        rank = word_rank(token.norm, lexicons)
        if rank is not None and (rank <= ALWAYS_COMMON_RANK or rank <= cfg.frequency_rank_threshold):
            continue

        reason = "is not in the frequency list" if rank is None else f"has frequency rank {rank}"
        findings.append(_finding(
            RuleId.L1, Severity.WARNING, stem, token.start, token.end,
            f"'{token.text}' {reason}; respondents may not know it", SuggestionKind.CLARIFY_TERM,
        ))
    return findings


def detect_vague_terms(stem: str, cfg: LintConfig, lexicons: LexiconSet) -> List[Finding]:
    """L2 on vague relative terms in the sentences that ask the question"""
    findings = []
    tokens = tokenize(stem)
    for sentence in _question_sentences(stem):
        inside = tokens_between(tokens, sentence.start, sentence.end)
        for position, token in enumerate(inside):
            if token.norm not in lexicons.vague_terms:
                continue
            if position > 0 and inside[position - 1].norm == 'how':
                continue
            findings.append(_finding(
                RuleId.L2, Severity.WARNING, stem, token.start, token.end,
                f"'{token.text}' has no fixed meaning; respondents will read it differently",
                SuggestionKind.CLARIFY_TERM,
            ))
    return findings


def detect_vague_noun_phrases(stem: str, cfg: LintConfig, lexicons: LexiconSet) -> List[Finding]:
    """L3 on broad head nouns; info when examples follow"""
    findings = []
    tokens = tokenize(stem)
    for position, token in enumerate(tokens):
        if token.norm not in lexicons.broad_nouns:
            continue

        start = token.start
        if position > 0:
            previous = tokens[position - 1]
            if (previous.norm.endswith(ADJECTIVE_SUFFIXES) and len(previous.norm) >= 4
                    and previous.norm not in lexicons.function_words
                    and not stem[previous.end:token.start].strip()):
                start = previous.start

        following = _lower(stem[token.end:]).lstrip()
        exemplified = bool(_EXEMPLIFICATION_RE.match(following))
        phrase = stem[start:token.end]
        if exemplified:
            findings.append(_finding(
                RuleId.L3, Severity.INFO, stem, start, token.end,
                f"'{phrase}' is broad, but examples follow", SuggestionKind.CLARIFY_TERM,
            ))
        else:
            findings.append(_finding(
                RuleId.L3, Severity.WARNING, stem, start, token.end,
                f"'{phrase}' is broad; say what it includes", SuggestionKind.CLARIFY_TERM,
            ))
    return findings


def measure_syntactic_complexity(stem: str, cfg: LintConfig,
                                 lexicons: LexiconSet) -> Tuple[ComplexityProfile, List[Finding]]:
    """
    Count tokens, subordinators and coordinators per sentence

    Returns:
        Tuple of (ComplexityProfile, L4/L5 findings)
    """
    tokens = tokenize(stem)
    profiles = []
    findings = []

    for sentence in split_sentences(stem):
        inside = tokens_between(tokens, sentence.start, sentence.end)
        counts = SentenceComplexity(
            start=sentence.start,
            end=sentence.end,
            tokens=len(inside),
            subordinators=sum(1 for t in inside if t.norm in lexicons.subordinators),
            coordinators=sum(1 for t in inside if t.norm in COORDINATORS),
        )
        profiles.append(counts)

        if counts.tokens > cfg.max_sentence_tokens or counts.subordinators >= cfg.min_subordinators:
            findings.append(_finding(
                RuleId.L4, Severity.WARNING, stem, sentence.start, sentence.end,
                f"Sentence has {counts.tokens} words and {counts.subordinators} subordinate clauses",
                SuggestionKind.SIMPLIFY_WORDING,
            ))
        if counts.coordinators >= cfg.min_coordinators:
            findings.append(_finding(
                RuleId.L5, Severity.WARNING, stem, sentence.start, sentence.end,
                f"Sentence joins {counts.coordinators} alternatives with 'or'/'and'",
                SuggestionKind.SIMPLIFY_WORDING,
            ))

    return ComplexityProfile(tuple(profiles)), findings


def detect_nominalizations(stem: str, cfg: LintConfig, lexicons: LexiconSet) -> List[Finding]:
    """L6 on nouns derived with a nominalizing suffix"""
    findings = []
    for token in tokenize(stem):
        word = token.norm
        if not word.isalpha() or word in lexicons.nominalization_exceptions:
            continue
        for suffix in lexicons.nominalization_suffixes:
            if not word.endswith(suffix) or len(word) - len(suffix) < 4:
                continue
            singular = word[:-len(suffix)] + _singular_suffix(suffix, lexicons)
            if singular not in lexicons.nominalization_exceptions:
                findings.append(_finding(
                    RuleId.L6, Severity.WARNING, stem, token.start, token.end,
                    f"'{token.text}' is a nominalization; a verb phrase is easier to process",
                    SuggestionKind.SIMPLIFY_WORDING,
                ))
            break
    return findings


def _singular_suffix(suffix: str, lexicons: LexiconSet) -> str:
    if suffix.endswith('ities'):
        return suffix[:-5] + 'ity'
    if suffix.endswith('nesses'):
        return suffix[:-6] + 'ness'
    if suffix.endswith('s') and suffix[:-1] in lexicons.nominalization_suffixes:
        return suffix[:-1]
    return suffix


def _double_barrel_excluded(sentence_text: str) -> List[Tuple[int, int]]:
    lowered = _lower(sentence_text)
    ranges = [(m.start(), m.end()) for m in _PARENTHETICAL_RE.finditer(lowered)]
    ranges += [(m.start(), m.end()) for m in _EXEMPLIFICATION_TAIL_RE.finditer(lowered)]
    return ranges


def detect_form_flaws(stem: str, cfg: LintConfig, lexicons: LexiconSet) -> List[Finding]:
    """N3, N4, N5, N7, N8 and N9"""
    findings = []
    tokens = tokenize(stem)
    sentences = split_sentences(stem)

    for start, end, phrase in _phrase_matches(stem, lexicons.emotional_terms):
        findings.append(_finding(
            RuleId.N3, Severity.INFO, stem, start, end,
            f"'{stem[start:end]}' is emotionally loaded or invokes prestige", SuggestionKind.NEUTRAL_TONE,
        ))

    for start, end, phrase in _phrase_matches(stem, lexicons.leading_phrases):
        findings.append(_finding(
            RuleId.N5, Severity.WARNING, stem, start, end,
            f"'{stem[start:end]}' leads respondents toward an answer", SuggestionKind.NEUTRAL_TONE,
        ))

    for start, end, phrase in _phrase_matches(stem, lexicons.intention_phrases):
        findings.append(_finding(
            RuleId.N8, Severity.WARNING, stem, start, end,
            "Asks about future intentions, which predict behavior poorly",
        ))
    will_you = WILL_YOU_RE.match(_lower(stem))
    if will_you:
        start = len(stem) - len(stem.lstrip())
        findings.append(_finding(
            RuleId.N8, Severity.WARNING, stem, start, will_you.end(),
            "Asks about future intentions, which predict behavior poorly",
        ))

    for sentence in sentences:
        if not sentence.interrogative:
            continue
        findings.extend(_double_barreled(stem, sentence, tokens))

    findings.extend(_double_negatives(stem, tokens, lexicons))

    for position, sentence in enumerate(sentences):
        if sentence.interrogative:
            continue
        if not any(s.interrogative for s in sentences[position + 1:]):
            continue
        inside = tokens_between(tokens, sentence.start, sentence.end)
        if inside and inside[0].norm in UNIVERSALS:
            findings.append(_finding(
                RuleId.N7, Severity.INFO, stem, sentence.start, sentence.end,
                "A universal assertion precedes the question and may act as a premise",
            ))

    return findings


def _double_barreled(stem: str, sentence, tokens: Sequence[Token]) -> List[Finding]:
    inside = tokens_between(tokens, sentence.start, sentence.end)
    if any(t.norm == 'between' for t in inside):
        return []

    excluded = [(sentence.start + a, sentence.start + b) for a, b in _double_barrel_excluded(sentence.text)]
    kept = [t for t in inside if not any(a <= t.start < b for a, b in excluded)]

    findings = []
    for position, token in enumerate(kept[:-1]):
        if token.norm != 'and':
            continue
        following = kept[position + 1]
        second = kept[position + 2] if position + 2 < len(kept) else None
        coordinates_object = following.norm in DETERMINERS
        coordinates_question = following.norm in AUXILIARIES and second is not None and second.norm == 'you'
        if coordinates_object or coordinates_question:
            end = second.end if coordinates_question else following.end
            findings.append(_finding(
                RuleId.N4, Severity.WARNING, stem, token.start, end,
                "One question asks about two things joined by 'and'",
            ))
    return findings


def _double_negatives(stem: str, tokens: Sequence[Token], lexicons: LexiconSet) -> List[Finding]:
    lowered = _lower(stem)
    bounds = [0] + [m.end() for m in _CLAUSE_BREAK_RE.finditer(lowered)] + [len(stem)]

    findings = []
    for clause_start, clause_end in zip(bounds, bounds[1:]):
        negations = [t for t in tokens_between(tokens, clause_start, clause_end) if t.norm in lexicons.negations]
        if len(negations) >= 2:
            findings.append(_finding(
                RuleId.N9, Severity.WARNING, stem, negations[0].start, negations[-1].end,
                f"{len(negations)} negations in one clause", SuggestionKind.SIMPLIFY_WORDING,
            ))
    return findings


def _period_months(match: re.Match) -> Optional[float]:
    unit = match.group('unit')
    if unit is None:
        return None
    count_word = match.group('count')
    if count_word is None:
        count = 1
    elif count_word.isdigit():
        count = int(count_word)
    else:
        count = _NUMBER_VALUES[count_word]
    return count * _UNIT_MONTHS[unit.rstrip('s')]


def detect_beyond_capability(stem: str, cfg: LintConfig, lexicons: LexiconSet) -> List[Finding]:
    """N6 when an exact count is asked over more than twelve months"""
    lowered = _lower(stem)
    count_request = EXACT_COUNT_RE.search(lowered)
    if not count_request:
        return []

    long_periods = [
        m for m in REFERENCE_PERIOD_RE.finditer(lowered)
        if (_period_months(m) or 0) > 12
    ]
    long_periods += list(LIFETIME_RE.finditer(lowered))
    if not long_periods:
        return []

    period = min(long_periods, key=lambda m: m.start())
    return [_finding(
        RuleId.N6, Severity.INFO, stem, period.start(), period.end(),
        "An exact count over such a long period is hard to recall",
    )]


def detect_missing_timeframe(stem: str, cfg: LintConfig, lexicons: LexiconSet) -> List[Finding]:
    """RTF when a frequency question has no reference period"""
    lowered = _lower(stem)
    question = FREQUENCY_QUESTION_RE.search(lowered)
    if not question or REFERENCE_PERIOD_RE.search(lowered):
        return []
    return [_finding(
        RuleId.RTF, Severity.WARNING, stem, question.start(), question.end(),
        "Frequency question without a reference period", SuggestionKind.ADD_TIMEFRAME,
    )]


def detect_bridging_inference(stem: str, cfg: LintConfig, lexicons: LexiconSet) -> List[Finding]:
    """L7 (info) when the question refers back to a concept it never restates"""
    sentences = split_sentences(stem)
    if len(sentences) < 2:
        return []

    tokens = tokenize(stem)
    findings = []
    for position, sentence in enumerate(sentences):
        if position == 0 or not sentence.interrogative:
            continue

        inside = tokens_between(tokens, sentence.start, sentence.end)
        trigger = _bridging_trigger(inside)
        if trigger is None:
            continue

        context = tokens_between(tokens, sentences[0].start, sentences[position - 1].end)
        earlier = {_lemma(t.norm, lexicons) for t in context if _is_content_word(t, lexicons)}
        current = {_lemma(t.norm, lexicons) for t in inside if _is_content_word(t, lexicons)}
        if earlier & current:
            continue

        start, end = trigger
        findings.append(_finding(
            RuleId.L7, Severity.INFO, stem, start, end,
            f"'{stem[start:end]}' relies on a link to the earlier sentence that is not spelled out",
            SuggestionKind.CLARIFY_TERM,
        ))
    return findings


def _bridging_trigger(inside: Sequence[Token]) -> Optional[Tuple[int, int]]:
    for token in inside:
        if token.norm in COMPARATIVES:
            return token.start, token.end
    for first, second in zip(inside, inside[1:]):
        if first.norm == 'the' and second.norm == 'following':
            return first.start, second.end
    for token in inside:
        if token.norm in DEMONSTRATIVES:
            return token.start, token.end
    return None


Detector = Callable[[str, LintConfig, LexiconSet], List[Finding]]


def _complexity_findings(stem: str, cfg: LintConfig, lexicons: LexiconSet) -> List[Finding]:
    return measure_syntactic_complexity(stem, cfg, lexicons)[1]


# Stem detectors in rule order
STEM_DETECTORS: Tuple[Detector, ...] = (
    detect_low_frequency_terms,
    detect_vague_terms,
    detect_vague_noun_phrases,
    _complexity_findings,
    detect_nominalizations,
    detect_bridging_inference,
    detect_form_flaws,
    detect_beyond_capability,
    detect_missing_timeframe,
)
