#!/usr/bin/env python3
"""Build the bundled FAQ testbed shipped in src/faqkit/data/testbed/.

The collection covers frequently asked questions about a computer science
degree program: 14 known-answer topics (6 question phrasings each), 6
inferred-answer topics (2 phrasings each), and 10 out-of-KB questions, over
a 120-passage knowledge base. Grades: 2 = highly relevant (the answer
passage), 1 = partially relevant.

Run from the repository root:  python scripts/build_testbed.py
"""

from __future__ import annotations

import json
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parents[1] / "src" / "faqkit" / "data" / "testbed"

FALLBACK = "I'm sorry, I don't have an answer."

ACRONYMS = {
    "CS": "Computer Science",
    "SE": "Software Engineering",
    "AI": "Artificial Intelligence",
    "ML": "Machine Learning",
    "IT": "Information Technology",
    "WAM": "Weighted Average Mark",
}

# Known topics: slug, answer passage, helper passages (grade 1), canonical
# question, five test variations, five training paraphrases.
KNOWN_TOPICS = [
    {
        "slug": "duration",
        "judged_helpers": [],
        "answer": (
            "The Bachelor of Computer Science takes three years of full-time study. "
            "Students on a part-time load usually finish the degree in six years."
        ),
        "helpers": [
            "Students in good standing may overload to four courses per semester and "
            "finish the Bachelor of Computer Science a little faster than the standard "
            "three years.",
            "Mid-year entry to the Bachelor of Computer Science opens in July and "
            "leaves the three-year duration of the degree unchanged.",
            "The academic calendar for the Bachelor of Computer Science runs two main "
            "semesters; optional summer courses shorten the three years slightly.",
        ],
        "canonical": "How many years of full-time study is the Bachelor of Computer Science?",
        "variations": [
            "How many years is the Computer Science degree full time?",
            "In how many years can students finish the Computer Science degree?",
            "If I enrol now, when would I be done?",
            "What's the usual time to get through it while holding down a job?",
            "Is it possible to wrap the whole thing up quicker than normal?",
        ],
        "paraphrases": [
            "How long does the Bachelor of Computer Science take?",
            "In how many years do students finish the Computer Science degree?",
            "What is the full-time duration of the Computer Science degree?",
            "How many years of study is the Bachelor of Computer Science?",
            "How long until the Computer Science degree is finished, studying full time?",
        ],
    },
    {
        "slug": "capstone",
        "judged_helpers": [0],
        "answer": (
            "Yes: all Computer Science students complete a capstone project in the "
            "final year, a team project running across two semesters with an industry "
            "partner."
        ),
        "helpers": [
            "Capstone teams are matched with industry partners in September; student "
            "groups may also propose a topic of their own for the capstone.",
            "Enrolment in the capstone requires passing the software engineering "
            "fundamentals course beforehand.",
        ],
        "canonical": "Do Computer Science students complete a capstone project?",
        "variations": [
            "Is there a capstone project in the final year?",
            "Is the capstone project a team project with an industry partner?",
            "Will I get to build something real before graduating?",
            "Does the course wind up with a big group build?",
            "What fills the last stretch before finishing up?",
        ],
        "paraphrases": [
            "Is a capstone project part of the Computer Science degree?",
            "Do students work on a capstone project in the final year?",
            "Does the Computer Science degree include a capstone project?",
            "Is the final-year capstone a team project with an industry partner?",
            "Are capstone projects completed by all Computer Science students?",
        ],
    },
    {
        "slug": "first-year-languages",
        "judged_helpers": [0, 1, 2],
        "answer": (
            "First-year programming courses in the Bachelor of Computer Science are "
            "taught in Python; Java joins in the second semester, and both languages "
            "continue into second year."
        ),
        "helpers": [
            "Later programming courses build on the first-year Python and Java "
            "material, adding C for systems work and JavaScript for the web.",
            "No prior programming experience is assumed in first year; the "
            "introductory Python course begins from the basics.",
            "A list of software tools for each first-year programming course is "
            "published before orientation, allowing installs ahead of week one.",
        ],
        "canonical": "Which programming languages are taught in first year?",
        "variations": [
            "What programming languages are taught in first-year Computer Science courses?",
            "Is Python or Java taught in the first year programming courses?",
            "What will I be coding in when I start?",
            "Do beginners get going with anything other than pseudocode?",
            "What should I brush up on before my classes begin?",
        ],
        "paraphrases": [
            "What programming languages are taught in the first year?",
            "Which languages are taught in first-year programming courses?",
            "Is Python taught in first year, or Java?",
            "Which programming languages will I learn in my first year?",
            "What languages are used in first-year Computer Science courses?",
        ],
    },
    {
        "slug": "double-degree",
        "judged_helpers": [1],
        "answer": (
            "A double degree is offered pairing the Bachelor of Computer Science with "
            "Business, Mathematics, or Design; the combined program takes four years "
            "full time."
        ),
        "helpers": [
            "Applications for the double degrees go through the standard admissions "
            "portal; Business remains the most sought-after combination.",
            "Double-degree students complete the capstone project once, with the "
            "credit shared between both degrees.",
        ],
        "canonical": "Can the Computer Science degree be combined with another degree?",
        "variations": [
            "Is a double degree offered with Computer Science?",
            "Which double degree pairings with Computer Science are offered, like Business or Design?",
            "Is it possible to study two programs at once?",
            "I want breadth beyond tech. What are my options?",
            "Could I also read something less technical on the side?",
        ],
        "paraphrases": [
            "Can Computer Science be combined with another degree?",
            "Is a double degree with Computer Science offered?",
            "What double degree pairings exist for Computer Science?",
            "Can I take Computer Science as part of a double degree?",
            "Is Computer Science offered combined with Business, Mathematics, or Design?",
        ],
    },
    {
        "slug": "honours-entry",
        "judged_helpers": [1],
        "answer": (
            "Entry to the honours year in Computer Science requires a Weighted "
            "Average Mark of at least 70 across second and third year courses, plus "
            "agreement from a supervisor."
        ),
        "helpers": [
            "The honours year runs as a full-time research year: two coursework units "
            "plus a thesis supervised by a member of the Computer Science staff.",
            "Honours applications open in October each year; late applications are "
            "considered while supervisors still hold capacity.",
        ],
        "canonical": "What WAM do I need for honours in CS?",
        "variations": [
            "What Weighted Average Mark does entry to the honours year require?",
            "What average mark do I need to get into the honours year?",
            "How do I qualify for the research-track fourth year?",
            "Are good grades enough to continue after third year?",
            "Who signs off on doing a thesis year?",
        ],
        "paraphrases": [
            "What Weighted Average Mark is needed for honours in Computer Science?",
            "What WAM does the honours year require?",
            "What average mark gets me into the CS honours year?",
            "What marks does entry to honours require?",
            "How high a WAM do I need for the honours year?",
        ],
    },
    {
        "slug": "entry-requirements",
        "judged_helpers": [0],
        "answer": (
            "The entry requirements for the Bachelor of Computer Science are an ATAR "
            "of 85 or equivalent and mathematics at year 12 level; no prior "
            "programming is required."
        ),
        "helpers": [
            "Applicants missing year 12 mathematics sit a bridging assessment before "
            "entry to the Bachelor of Computer Science.",
            "Non-school-leaver entry to the Bachelor of Computer Science is assessed "
            "on prior study or the STAT test rather than a school rank.",
            "International applicants to the Bachelor of Computer Science must also "
            "meet the English language benchmarks.",
        ],
        "canonical": "What are the entry requirements for the Bachelor of Computer Science?",
        "variations": [
            "Is an ATAR of 85 enough for the Bachelor of Computer Science?",
            "Is year 12 mathematics required for entry to Computer Science?",
            "Do I stand a chance of getting in with my school results?",
            "What do admissions look at for school leavers?",
            "Will they take me if I've never written a line of code?",
        ],
        "paraphrases": [
            "What are the admission requirements for the Bachelor of Computer Science?",
            "What ATAR is required for the Bachelor of Computer Science?",
            "Is mathematics required for entry to the CS degree?",
            "What are the prerequisites for entering the Computer Science degree?",
            "What entry score and subjects does the Bachelor of Computer Science require?",
        ],
    },
    {
        "slug": "part-time",
        "judged_helpers": [0, 1],
        "answer": (
            "Part-time study is available throughout the Computer Science program; "
            "most courses also run an evening lecture stream aimed at working students."
        ),
        "helpers": [
            "Part-time enrolment means two courses per semester; international "
            "students on a student visa must remain enrolled full-time.",
            "Switching between full-time and part-time enrolment happens in the "
            "enrolment system before each semester's census date.",
        ],
        "canonical": "Is part-time study available in Computer Science?",
        "variations": [
            "Is the Computer Science program available part-time?",
            "Is there an evening lecture stream for part-time students?",
            "Can I keep my day job while enrolled?",
            "How flexible is the timetable for people with commitments?",
            "Do classes run after office hours?",
        ],
        "paraphrases": [
            "Can Computer Science be studied part-time?",
            "Is part-time enrolment available in the Computer Science program?",
            "Does the Computer Science program offer an evening lecture stream?",
            "Can I study the CS program part-time?",
            "Is part-time study an option for Computer Science students?",
        ],
    },
    {
        "slug": "exchange",
        "judged_helpers": [0, 1, 2],
        "answer": (
            "Computer Science students may spend one semester on exchange at a "
            "partner university in third year, with courses pre-approved for credit "
            "before departure."
        ),
        "helpers": [
            "Exchange applications close in March for the following year; a credit "
            "average is expected for nomination to a partner university.",
            "A travel grant of up to two thousand dollars supports students accepted "
            "for exchange.",
            "Students on exchange pay tuition at home rates; semester results from "
            "the partner university transfer back as ungraded credit.",
        ],
        "canonical": "Can Computer Science students go on exchange?",
        "variations": [
            "Is a semester on exchange at a partner university possible?",
            "How does a third-year exchange semester work for Computer Science students?",
            "Could I do part of my study overseas?",
            "Does the school support studying abroad for a bit?",
            "I want to see the world mid-degree. What are my options?",
        ],
        "paraphrases": [
            "Can I go on exchange during the Computer Science degree?",
            "Is student exchange available to Computer Science students?",
            "Can CS students spend a semester on exchange at a partner university?",
            "Does the program allow an exchange semester in third year?",
            "Are exchange semesters open to Computer Science students?",
        ],
    },
    {
        "slug": "internship-credit",
        "judged_helpers": [1],
        "answer": (
            "Industry internships count towards the Computer Science degree: a "
            "12-week placement is credited as one elective once approved by the "
            "work-integrated learning office."
        ),
        "helpers": [
            "The industry internship subject is graded pass or fail, based on the "
            "employer's report and a reflective portfolio.",
            "Internship placements appear on the school's careers board; students "
            "may also source a placement of their own for approval.",
        ],
        "canonical": "Can an internship count as credit towards the Computer Science degree?",
        "variations": [
            "Do internships count as elective credit?",
            "How does a 12-week internship get approved for credit?",
            "If a company takes me on over summer, does that help my progress?",
            "Is paid work experience recognised academically?",
            "Can a real-world stint shorten my study?",
        ],
        "paraphrases": [
            "Does an internship count for credit in the Computer Science degree?",
            "Can internships be credited towards the degree?",
            "Is elective credit given for industry internships?",
            "Can a 12-week internship be credited as an elective?",
            "Do internships earn credit in Computer Science?",
        ],
    },
    {
        "slug": "laptop",
        "judged_helpers": [1],
        "answer": (
            "No specific laptop model is mandated for Computer Science; any laptop "
            "running a current operating system works, and the computing labs stay "
            "open to all enrolled students."
        ),
        "helpers": [
            "The computing labs open 24 hours during semester with card access; lab "
            "machines carry all course software pre-installed.",
            "Student licences for development software come free through the school's "
            "software portal, so a mid-range laptop covers the coursework.",
        ],
        "canonical": "Do I need a specific laptop for Computer Science?",
        "variations": [
            "Is a specific laptop model needed for the Computer Science program?",
            "What kind of laptop should I bring to the computing labs?",
            "Will my ageing MacBook survive this degree?",
            "Must I buy new hardware before starting?",
            "Any tech shopping list for freshers?",
        ],
        "paraphrases": [
            "Do I need a particular laptop for the Computer Science program?",
            "Is a specific laptop required for Computer Science?",
            "What laptop model works for Computer Science?",
            "Are there laptop requirements for CS students?",
            "Does Computer Science mandate a certain kind of laptop?",
        ],
    },
    {
        "slug": "majors",
        "judged_helpers": [0, 1, 2],
        "answer": (
            "The Bachelor of Computer Science offers four majors: Artificial "
            "Intelligence, cyber security, data science, and software systems; majors "
            "are chosen at the end of first year."
        ),
        "helpers": [
            "Changing majors in the Bachelor of Computer Science is free before third "
            "year begins; later changes may extend the degree.",
            "Each major in the Bachelor of Computer Science prescribes four "
            "upper-level courses; the rest of the study plan is shared across all "
            "majors.",
            "The data science major shares the first-year core with the other "
            "Computer Science majors and adds statistics courses from second year.",
        ],
        "canonical": "What majors are offered in the Bachelor of Computer Science?",
        "variations": [
            "What are the majors in the Bachelor of Computer Science?",
            "When are the cyber security, data science, and AI majors chosen?",
            "Can the degree be steered toward a specialty?",
            "What streams exist after the common start?",
            "I'm torn between security and ML. Do I have to pick at enrolment?",
        ],
        "paraphrases": [
            "Which majors are offered in the Bachelor of Computer Science?",
            "What majors can Computer Science students choose?",
            "What are the four majors in the Bachelor of Computer Science?",
            "When are majors chosen in the Computer Science degree?",
            "Which areas can I major in within Computer Science?",
        ],
    },
    {
        "slug": "programming-help",
        "judged_helpers": [],
        "answer": (
            "Free drop-in programming help runs in the computing labs every weekday "
            "afternoon during semester, staffed by senior Computer Science students."
        ),
        "helpers": [
            "Peer-assisted study sessions for the toughest first-year Computer "
            "Science courses run weekly from week three.",
            "One-on-one academic skills appointments can be booked online through the "
            "student support portal.",
        ],
        "canonical": "Is there free programming help for Computer Science students?",
        "variations": [
            "Where can I get drop-in programming help?",
            "Is drop-in programming help available in the computing labs?",
            "What support exists when I'm stuck on an assignment?",
            "Who do I turn to if the coursework gets overwhelming?",
            "Are there mentors for first years?",
        ],
        "paraphrases": [
            "Is free programming help available to Computer Science students?",
            "Where do Computer Science students get programming help?",
            "Does the school offer free drop-in help with programming?",
            "Is programming help staffed in the computing labs?",
            "Can I get free help with programming assignments?",
        ],
    },
    {
        "slug": "diploma-pathway",
        "judged_helpers": [0],
        "answer": (
            "Graduates of the Diploma of Information Technology receive one year of "
            "block credit and enter the Bachelor of Computer Science directly into "
            "second year."
        ),
        "helpers": [
            "Block credit from the Diploma of Information Technology is applied "
            "automatically at enrolment; course-by-course credit for other prior "
            "study takes a credit application.",
            "The admissions team publishes a credit precedent database listing prior "
            "qualifications and the credit carried into each degree.",
        ],
        "canonical": "How much credit does the Diploma of IT give towards the Bachelor of Computer Science?",
        "variations": [
            "Does the Diploma of Information Technology give block credit into second year?",
            "Can diploma graduates enter the Bachelor of Computer Science with credit?",
            "I finished a vocational qualification. Where would I start?",
            "Do previous studies knock time off the degree?",
            "Is there an articulation arrangement with the college sector?",
        ],
        "paraphrases": [
            "How much credit does the Diploma of Information Technology carry into the Bachelor of Computer Science?",
            "What credit do IT diploma graduates get towards the CS degree?",
            "Do Diploma of Information Technology graduates enter second year directly?",
            "How much block credit comes with the IT diploma?",
            "What advanced standing does the Diploma of Information Technology give?",
        ],
    },
    {
        "slug": "assessment",
        "judged_helpers": [2],
        "answer": (
            "Computer Science courses are assessed through a mix of assignments and a "
            "final exam; the typical split is 50 percent coursework and 50 percent "
            "exam, as set out in each course guide."
        ),
        "helpers": [
            "Exam timetables come out in week eight; Computer Science exams usually "
            "run on campus in the main exam halls.",
            "A course guide for every Computer Science course lists the assessment "
            "items, weights, and due dates in week one.",
            "Supplementary exams in Computer Science courses are offered where a "
            "final exam result lands within five marks of a pass.",
        ],
        "canonical": "How are Computer Science courses assessed?",
        "variations": [
            "What is the split between assignments and the final exam?",
            "What percent of a Computer Science course is the final exam?",
            "Is everything riding on one big test?",
            "How heavy is continuous evaluation versus end-of-term?",
            "Will projects or tests decide my grade?",
        ],
        "paraphrases": [
            "How is assessment structured in Computer Science courses?",
            "How are courses in Computer Science assessed?",
            "What mix of assignments and exams do Computer Science courses use?",
            "What is the coursework and exam split in Computer Science?",
            "How much of a CS course grade is the final exam?",
        ],
    },
]

# Dedicated passages used only as inferred-answer sources.
INFERRED_SOURCE_PASSAGES = {
    "scholarships": (
        "The School of Computing awards twenty merit scholarships of five thousand "
        "dollars each year to commencing Computer Science students."
    ),
    "study-loan": (
        "Domestic students can defer tuition through the national study loan scheme "
        "and repay through the tax system once income passes the threshold."
    ),
    "study-tour": (
        "Short international study tours of two to four weeks run each summer and "
        "winter break, earning one elective's worth of credit."
    ),
    "accreditation": (
        "The Bachelor of Computer Science is accredited by the national computing "
        "society at the professional level."
    ),
    "careers": (
        "Recent Computer Science graduates work as software engineers, data "
        "analysts, security consultants, and systems engineers; the school's median "
        "graduate salary sits above the national average."
    ),
}

# Inferred topics: gold answers are written by combining the source passages.
INFERRED_TOPICS = [
    {
        "slug": "final-year",
        "questions": [
            "What does the final year of the CS degree involve?",
            "What courses and projects make up the last year?",
        ],
        "sources": [("capstone", "answer"), ("majors", "helper", 1)],
        "gold": (
            "In the final year you complete a two-semester capstone project, usually "
            "with an industry partner, alongside the four upper-level courses "
            "prescribed by your major."
        ),
    },
    {
        "slug": "study-costs",
        "questions": [
            "How can I reduce the cost of studying Computer Science?",
            "What financial help exists for Computer Science students?",
        ],
        "sources": [("__inferred__", "scholarships"), ("__inferred__", "study-loan")],
        "gold": (
            "You can apply for one of the school's twenty merit scholarships worth "
            "five thousand dollars, and domestic students can defer tuition through "
            "the national study loan scheme."
        ),
    },
    {
        "slug": "work-and-study",
        "questions": [
            "How can work fit into the Computer Science degree?",
            "Can employment be part of my study plan?",
        ],
        "sources": [("part-time", "answer"), ("internship-credit", "answer")],
        "gold": (
            "You can study part-time with evening lecture streams while working, and "
            "a 12-week industry internship can be credited as an elective once "
            "approved."
        ),
    },
    {
        "slug": "no-maths-entry",
        "questions": [
            "Can I get in without year 12 maths or coding experience?",
            "What if I have neither maths nor a programming background?",
        ],
        "sources": [("entry-requirements", "answer"), ("entry-requirements", "helper", 0)],
        "gold": (
            "Yes. No prior programming is required, and applicants without year 12 "
            "mathematics can sit the university's mathematics bridging assessment "
            "before entry."
        ),
    },
    {
        "slug": "overseas-options",
        "questions": [
            "What are all the ways to study overseas during the degree?",
            "Besides a full semester abroad, how else can I study internationally?",
        ],
        "sources": [("exchange", "answer"), ("__inferred__", "study-tour")],
        "gold": (
            "You can spend a third-year semester on exchange at a partner university, "
            "or join a short two-to-four week study tour in the breaks for one "
            "elective's worth of credit."
        ),
    },
    {
        "slug": "graduate-outcomes",
        "questions": [
            "What does the Computer Science degree lead to professionally?",
            "Is the degree recognised, and what jobs follow it?",
        ],
        "sources": [("__inferred__", "accreditation"), ("__inferred__", "careers")],
        "gold": (
            "The degree is professionally accredited by the national computing "
            "society, and graduates typically work as software engineers, data "
            "analysts, security consultants, or systems engineers."
        ),
    },
]

# Out-of-KB questions: in domain, deliberately unanswerable from the passages.
OUT_OF_KB_QUESTIONS = [
    ("oob-parking", "How much does a semester parking permit cost at the city campus?"),
    ("oob-semester-dates", "What date does semester two start this year?"),
    ("oob-hackathon-winner", "Who won the school hackathon last year?"),
    ("oob-lockers", "Can I rent a locker in the computing building overnight?"),
    ("oob-library-hours", "What are the library's opening hours during the exam period?"),
    ("oob-cafe-discount", "Is there a discount at the campus cafe for computing students?"),
    ("oob-lost-card", "How do I replace a lost student card?"),
    ("oob-gym", "Does the gym offer a student membership deal?"),
    ("oob-lecturer-experience", "How many years does the average Computer Science lecturer spend in industry?"),
    ("oob-mooc-credit", "Can an online course certificate count as credit towards the degree?"),
]

FILLER_PASSAGES = [
    "Orientation week for new computing students runs the week before semester; registration for lab inductions opens online.",
    "The programming society runs weekly social coding nights and an annual 48-hour hackathon open to all students.",
    "Academic advisors in the School of Computing keep walk-in hours twice a week; bookings are also taken online.",
    "Lecture recordings for all Computer Science courses are published within 24 hours through the learning management system.",
    "The Women in Computing network pairs first-year students with senior mentors and organises industry site visits.",
    "Tutorial allocation uses a preference system; popular time slots are balloted in the first week of semester.",
    "Students may defer an offer of a place in the Bachelor of Computer Science for up to twelve months.",
    "A leave of absence of one or two semesters can be taken after completing first year without loss of place.",
    "The school's careers fair each autumn brings around sixty employers to campus, from startups to large consultancies.",
    "Alumni mentoring matches final-year Computer Science students with graduates working in the field each student targets.",
    "Academic integrity training is compulsory in the first semester; breaches are handled under the student conduct code.",
    "Group assignments include a peer-assessment component so individual contributions affect individual grades.",
    "The cyber security courses include a supervised penetration-testing lab run on an isolated network.",
    "The Artificial Intelligence courses in third year cover search, probabilistic reasoning, and neural networks.",
    "An ethics and professional practice course is compulsory in second year for all computing degrees.",
    "Research internships with the school's labs are advertised each semester and pay a stipend for ten weeks.",
    "The school hosts a seminar series where visiting researchers present; attendance is open to undergraduates.",
    "Undergraduate research scholarships for the summer are awarded on academic merit and a short proposal.",
    "Third-year students can take one graduate-level course with the course coordinator's permission.",
    "The student services hub handles enrolment questions, documentation requests, and study plan checks.",
    "Special consideration for assessment can be applied for within five working days of the affected due date.",
    "Reasonable adjustment plans for students with a disability are arranged through the equitable learning service.",
    "The mathematics department teaches the first-year discrete mathematics course taken by all computing students.",
    "Second-year Computer Science includes algorithms, operating systems, databases, and computer architecture.",
    "The software systems courses use version control, code review, and continuous integration from the first assignment.",
    "Course enrolment for the next semester opens at staggered times based on completed credit points.",
    "A full-time study load is four courses per semester; each course carries twelve credit points.",
    "The minor in interaction design is offered by the design faculty and fits within the Computer Science electives.",
    "A minor requires four courses from a single discipline outside the computing core.",
    "Elective space in the Bachelor of Computer Science spans four free-choice courses across the degree.",
    "The games development elective sequence covers graphics, game engines, and a team-built game showcase.",
    "Networking courses include hands-on labs with physical routers and switches in the dedicated networks lab.",
    "The robotics club maintains a fleet of small autonomous vehicles and competes in national challenges.",
    "Printing in the computing labs is charged per page to the student account; scanning is free.",
    "Every enrolled student receives a university email account and cloud storage through the student portal.",
    "Wireless coverage spans all teaching buildings; eduroam gives access at partner institutions worldwide.",
    "The computing help desk resets passwords, fixes account lockouts, and supports the virtual desktop service.",
    "High-performance computing access is granted to students taking the parallel computing elective.",
    "The maker space has 3D printers, soldering stations, and electronics kits for loan.",
    "Quiet study rooms in the computing building can be reserved in two-hour blocks through the room system.",
    "The student representative council for computing meets monthly and feeds issues back to the school board.",
    "Course outlines state the expected weekly workload, typically ten hours per course including classes.",
    "All assignments are submitted through the learning management system, and plagiarism checks run on each submission.",
    "Late submissions lose five percent of the available marks per day, up to five days, unless an extension applies.",
    "Extensions of up to a week are granted by course coordinators with documented grounds.",
    "Results are released at the end of the examination period, followed by a review-of-grade window.",
    "A pass requires fifty percent overall; some courses also set a hurdle on the final exam.",
    "The dean's list recognises the top five percent of students in each year of the program.",
    "The industry advisory board reviews the Computer Science curriculum every two years.",
    "Guest lectures from practising engineers feature in the software architecture course each spring.",
    "Student software projects can be commercialised through the university's startup incubator program.",
    "The incubator runs a pitch competition each year with seed funding for the winning student team.",
    "The school's open source society maintains projects open to student contributions for experience.",
    "Competitive programming training sessions prepare teams for the regional collegiate contest.",
    "The database courses use both relational systems and a document store in assignments.",
    "The machine learning course requires the statistics course from second year as a prerequisite.",
    "A human-computer interaction course is part of the software systems major's prescribed set.",
    "The compilers elective is offered in odd years and fills quickly; waitlists are processed by merit.",
    "Study spaces in the computing building include bookable pods with large shared screens for team work.",
    "International student advisors run visa and work-rights information sessions every semester.",
    "The postgraduate coursework programs in computing admit graduates of any bachelor degree.",
    "Tutors for Computer Science courses are hired each semester; senior students apply online.",
    "The school newsletter lists prize winners, new courses, and upcoming events each month.",
    "Lost property from the computing labs is handed to the building manager's office.",
    "Bicycle cages with card access sit under the computing building; helmets can be stored with the bike.",
    "The campus shuttle loops between the two teaching precincts every fifteen minutes on class days.",
    "Feedback on each course is collected in the final teaching week and summarised for the school board.",
]


def build():
    passages = []
    passage_ids: dict[object, str] = {}

    def add_passage(key, text, topic=None):
        pid = f"p{len(passages) + 1:03d}"
        passages.append({"id": pid, "text": text, "topic": topic})
        passage_ids[key] = pid
        return pid

    for topic in KNOWN_TOPICS:
        slug = topic["slug"]
        add_passage((slug, "answer"), topic["answer"], topic=slug)
        for i, helper in enumerate(topic["helpers"]):
            add_passage((slug, "helper", i), helper, topic=slug)
    for key, text in INFERRED_SOURCE_PASSAGES.items():
        add_passage(("__inferred__", key), text, topic=key)
    for text in FILLER_PASSAGES:
        add_passage(("__filler__", len(passages)), text)

    questions = []
    answers = []
    qrels = []
    qn = 0

    def add_question(text, qtype, topic, answer_id):
        nonlocal qn
        qn += 1
        questions.append(
            {
                "id": f"q{qn:03d}",
                "text": text,
                "type": qtype,
                "topic": topic,
                "gold_answer_id": answer_id,
            }
        )

    for topic in KNOWN_TOPICS:
        slug = topic["slug"]
        answer_id = f"a-{slug}"
        answers.append(
            {
                "id": answer_id,
                "text": topic["answer"],
                "source_passages": [passage_ids[(slug, "answer")]],
            }
        )
        add_question(topic["canonical"], "known", slug, answer_id)
        for variation in topic["variations"]:
            add_question(variation, "known", slug, answer_id)
        qrels.append((slug, passage_ids[(slug, "answer")], 2))
        for i in topic["judged_helpers"]:
            qrels.append((slug, passage_ids[(slug, "helper", i)], 1))

    for topic in INFERRED_TOPICS:
        slug = topic["slug"]
        answer_id = f"a-{slug}"
        source_ids = [passage_ids[tuple(s)] for s in topic["sources"]]
        answers.append(
            {"id": answer_id, "text": topic["gold"], "source_passages": source_ids}
        )
        for q in topic["questions"]:
            add_question(q, "inferred", slug, answer_id)
        for pid in source_ids:
            qrels.append((slug, pid, 1))

    for slug, q in OUT_OF_KB_QUESTIONS:
        answer_id = f"a-{slug}"
        answers.append({"id": answer_id, "text": FALLBACK, "source_passages": []})
        add_question(q, "out_of_kb", slug, answer_id)

    OUT_DIR.mkdir(parents=True, exist_ok=True)
    with open(OUT_DIR / "passages.jsonl", "w", encoding="utf-8") as fh:
        for p in passages:
            obj = {"id": p["id"], "text": p["text"]}
            if p["topic"]:
                obj["topic"] = p["topic"]
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")
    with open(OUT_DIR / "questions.jsonl", "w", encoding="utf-8") as fh:
        for q in questions:
            fh.write(json.dumps(q, ensure_ascii=False) + "\n")
    with open(OUT_DIR / "answers.jsonl", "w", encoding="utf-8") as fh:
        for a in answers:
            fh.write(json.dumps(a, ensure_ascii=False) + "\n")
    with open(OUT_DIR / "qrels.txt", "w", encoding="utf-8") as fh:
        for topic, pid, grade in qrels:
            fh.write(f"{topic} 0 {pid} {grade}\n")
    with open(OUT_DIR / "acronyms.json", "w", encoding="utf-8") as fh:
        json.dump(ACRONYMS, fh, indent=2)
        fh.write("\n")
    with open(OUT_DIR / "paraphrases.jsonl", "w", encoding="utf-8") as fh:
        for topic in KNOWN_TOPICS:
            fh.write(
                json.dumps(
                    {"topic": topic["slug"], "variations": topic["paraphrases"]},
                    ensure_ascii=False,
                )
                + "\n"
            )

    known = sum(1 for q in questions if q["type"] == "known")
    inferred = sum(1 for q in questions if q["type"] == "inferred")
    oob = sum(1 for q in questions if q["type"] == "out_of_kb")
    print(
        f"passages={len(passages)} questions={len(questions)} "
        f"(known={known} inferred={inferred} out_of_kb={oob}) answers={len(answers)}"
    )


if __name__ == "__main__":
    build()
