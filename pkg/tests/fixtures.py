"""Golden linearized examples used across the test suite.

Each fixture is one (task, question block, proof block) triple plus the
answer the example asserts. These strings are the ground truth the parser,
serializer, simulators and metrics are tested against.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Fixture:
    name: str
    task: str
    question: str
    proof: str


GSM8K_CLIPS = Fixture(
    name='gsm8k_clips',
    task='gsm8k',
    question='(1) Natalia sold clips to 48 of her friends in April, and then (2) she sold half as many clips in May. (3) How many clips did Natalia sell altogether in April and May?',
    proof='(1) & (2) -> (4): Natalia sold 48/2 = 24 clips in May; (1) & (3) & (4) -> (5): Natalia sold 48+24 = 72 clips altogether in April and May; (3) & (5) -> (6): The answer is 72;',
)

ARC_SUN = Fixture(
    name='arc_sun',
    task='arc',
    question='(1) the sun rising / setting occurs once per day (2) the sun setting is a kind of event (3) the sun rising is a kind of event (4) Which event occurs on a daily cycle? (5) A) The Sun rises and sets. (6) B) Earth tilts on its axis. (7) C) Earth revolves around the Sun. (8) D) The Moon revolves around Earth.',
    proof='(1) & (2) & (3) -> (9): the sun rising and setting is the event that occurs once per day; (9) -> (10): The answer is A);',
)

ALCHEMY_BEAKERS = Fixture(
    name='alchemy_beakers',
    task='scone-alchemy',
    question='(1) first beaker has 0 chemicals (2) second beaker has 1 green chemical (3) third beaker has 1 purple chemical (4) fourth beaker has 1 orange chemical (5) fifth beaker has 1 green chemical (6) sixth beaker has 1 red chemical (7) seventh beaker has 1 yellow chemical (8) throw out the orange chemical (9) then, add the leftmost beaker of green chemical to the yellow chemical (10) mix it (11) then, add the remaining green chemical to it (12) mix that too',
    proof='(4) & (8) -> (13): fourth beaker has 0 chemicals; (2) & (7) & (9) -> (14): seventh beaker has 1 yellow and 1 green chemical; (2) & (9) -> (15): second beaker has 0 chemicals; (14) & (10) -> (16): seventh beaker has 2 brown chemicals; (16) & (11) & (5) -> (17): seventh beaker has 2 brown and 1 green chemicals; (11) & (5) -> (18): fifth beaker has 0 chemicals; (17) & (12) -> (19): seventh beaker has 3 brown chemicals;',
)

SCENE_PEOPLE = Fixture(
    name='scene_people',
    task='scone-scene',
    question='(1) position 1 has no person (2) position 2 has no person (3) position 3 has no person (4) position 4 has no person (5) position 5 has person in red shirt and yellow hat (6) position 6 has no person (7) position 7 has no person (8) position 8 has no person (9) position 9 has no person (10) position 10 has no person (11) a man in a yellow shirt appears on the right of the man in a red shirt and yellow hat (12) a second man in a yellow shirt appears on the left end (13) he leaves (14) the man in the red shirt and yellow hat moves one space to the left (15) a man in a red shirt appears on his right',
    proof='(11) & (6) -> (16): position 6 has person in yellow shirt and no hat; (1) & (12) -> (17): position 1 has person in yellow shirt and no hat; (17) & (13) -> (18): position 1 has no person; (14) & (4) & (5) -> (19): position 4 has person in red shirt and yellow hat; (14) & (5) -> (20): position 5 has no person; (20) & (15) -> (21): position 5 has person in red shirt and no hat;',
)

TANGRAMS_FIGURES = Fixture(
    name='tangrams_figures',
    task='scone-tangrams',
    question='(1) position 1 has figure A (2) position 2 has figure D (3) position 3 has figure E (4) position 4 has figure C (5) position 5 has figure B (6) swap the 1st and 5th figure (7) swap the 1st and 3rd figure (8) swap them back (9) delete the 5th figure (10) add it back',
    proof='(1) & (6) -> (11): position 1 has figure B; (5) & (6) -> (12): position 5 has figure A; (11) & (7) -> (13): position 1 has figure E; (3) & (7) -> (14): position 3 has figure B; (13) & (8) -> (15): position 1 has figure B; (14) & (8) -> (16): position 3 has figure E; (12) & (9) -> (17): position 5 has no figure; (17) & (10) -> (18): position 5 has figure A;',
)

GSM8K_AGES = Fixture(
    name='gsm8k_ages',
    task='gsm8k',
    question='(1) Adam and Tom are brothers. (2) Adam is 8 years old and (3) Tom is 12 years old. (4) In how many years will their combined age be 44 years old?',
    proof='(2) & (3) -> (5): At present, the two brothers have a combined age of 8 + 12 = 20 years old.; (5) -> (6): Therefore, 1 year means an increase in the sum of their ages by 1 * 2 = 2 years.; (4) & (5) -> (7): Adam and Tom need a total of 44 - 20 = 24 more years to be 44 years old together.; (7) -> (8): So both brothers will be 44 years old together after 24 / 2 = 12 years.; (4) & (8) -> (9): The answer is 12;',
)

AQUA_RAT_BIRDS = Fixture(
    name='aqua_rat_birds',
    task='aqua-rat',
    question='(1) Three birds are flying at a fast rate of 900 kilometers per hour. (2) What is their speed in miles per minute? (3) [1km = 0.6 miles] (4) A)32400 (5) B)6000 (6) C)600 (7) D)60000 (8) E)10',
    proof='(0) -> (9): To calculate the equivalent of miles in a kilometer; (3) -> (10): 0.6 kilometers = 1 mile; (10) & (1) -> (11): 900 kilometers = (0.6)*900 = 540 miles; (0) -> (12): In 1 hour there are 60 minutes; (11) & (12) & (2) -> (13): Speed in miles/minutes = 60 * 540 = 32400; (13) & (2) & (4) -> (14): Correct answer - A; (14) -> (15): The answer is A);',
)

AR_LSAT_LOCKERS = Fixture(
    name='ar_lsat_lockers',
    task='ar-lsat',
    question="(1) Four boys - (2) Fred, Juan, Marc, and Paul - (3) and three girls - (4) Nita, Rachel, and Trisha - (5) will be assigned to a row of five adjacent lockers, (6) numbered consecutively 1 through 5, (7) arranged along a straight wall. (8) The following conditions govern the assignment of lockers to the seven children: (9) Each locker must be assigned to either one or two children, (10) and each child must be assigned to exactly one locker. (11) Each shared locker must be assigned to one girl and one boy. (12) Juan must share a locker, (13) but Rachel cannot share a locker. (14) Nita's locker cannot be adjacent to Trisha's locker. (15) Fred must be assigned to locker 3. (16) Which one of the following is a complete and (17) accurate list of the children who must be among those assigned to shared lockers? (18) A) Fred, Juan (19) B) Juan, Paul (20) C) Juan, Marc, Paul (21) D) Juan, Marc, Trisha (22) E) Juan, Nita, Trisha",
    proof='(1) & (3) & (5) -> (23): Four boys and three girls will be assigned to five adjacent lockers; (10) & (11) & (9) -> (24): Each locker can be assigned to max two children, one girl and one boy, and one child must be assigned to exactly one locker; (12) & (14) -> (25): Kids who can share lockers : Juan, Nita, Trisha; (13) -> (26): Kids not sharing lockers : Rachel; (0) -> (27): Answer is 22; (27) -> (28): The answer is E);',
)

ALL_FIXTURES = (
    GSM8K_CLIPS,
    ARC_SUN,
    ALCHEMY_BEAKERS,
    SCENE_PEOPLE,
    TANGRAMS_FIGURES,
    GSM8K_AGES,
    AQUA_RAT_BIRDS,
    AR_LSAT_LOCKERS,
)

# The seven distinct appendix-style scenarios (GSM8K_CLIPS is the inline
# walkthrough example; the acceptance fixture set is the other seven).
ACCEPTANCE_FIXTURES = tuple(f for f in ALL_FIXTURES if f is not GSM8K_CLIPS)
