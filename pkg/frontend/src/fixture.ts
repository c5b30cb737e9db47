// Generated by scripts/embed-fixture.mjs from fixtures/html/serp.html
export const FIXTURE_SERP_HTML = "<!DOCTYPE html>\n<html>\n<head>\n<title>championship final - Search</title>\n<style>body{font-family:arial,sans-serif}</style>\n</head>\n<body>\n<header id=\"topbar\">\n<a href=\"https://search.example/?tab=images\">Images</a>\n<a href=\"https://search.example/?tab=news\">News</a>\n</header>\n<main id=\"results\">\n<div class=\"featured\" id=\"feat-1\">\n<div class=\"snippet\">Election results announced for the region on schedule</div>\n<a href=\"https://civic-portal.example/results\">civic-portal.example</a>\n</div>\n<div class=\"g\" id=\"res-1\">\n<a href=\"https://sports-daily.example/final\"><h3>Local team celebrates championship win</h3></a>\n<div class=\"snippet\">The city club celebrates a famous win after years of effort.</div>\n<a class=\"cite\" href=\"https://sports-daily.example/final#story\">sports-daily.example &rsaquo; final</a>\n</div>\n<div class=\"g\" id=\"res-2\">\n<a href=\"https://en.wikipedia.org/wiki/War\"><h3>War - Wikipedia</h3></a>\n<div class=\"snippet\">War is an armed conflict marked by crisis, panic and tragedy.</div>\n</div>\n<div class=\"g\" id=\"res-3\">\n<a href=\"https://world-briefs.example/peace\"><h3>Historic peace accord wins backing to end the war</h3></a>\n<div class=\"snippet\">Negotiators press ahead as both sides accept the draft text.</div>\n</div>\n<div class=\"news-card\" id=\"news-1\">\n<a href=\"https://news-wire.example/markets\"><h3>Bad news grips markets</h3></a>\n<div class=\"snippet\">Traders describe the session as heavy selling spreads.</div>\n</div>\n<div class=\"video-result\" id=\"vid-1\">\n<a href=\"https://video-hub.example/watch?v=42\"><h3>Championship final highlights</h3></a>\n<div class=\"meta\">3:41 &middot; video-hub.example</div>\n</div>\n</main>\n<footer><a href=\"https://search.example/about\">About</a></footer>\n</body>\n</html>\n";
