import assert from "node:assert/strict";
import { test } from "node:test";
import { ApiError } from "../src/api.js";
import { renderQueue, renderRow } from "../src/render.js";
import { applyError, applyQueuePage, applyStatus, initialState } from "../src/state.js";
import { loadFixture } from "./helpers.js";
const page = loadFixture("candidates.json");
const status = loadFixture("status.json");
function countMatches(html, re) {
    return (html.match(re) ?? []).length;
}
test("queue renders one row per candidate", () => {
    const state = applyQueuePage(initialState("run-ui"), page);
    const html = renderQueue(state);
    assert.equal(countMatches(html, /<article class="candidate"/g), page.items.length);
    for (const item of page.items) {
        assert.ok(html.includes(item.domain));
    }
});
test("badge set matches each item's evidence bundle", () => {
    for (const item of page.items) {
        const html = renderRow(item);
        assert.equal(countMatches(html, /class="badge /g), item.indicators.length);
        for (const indicator of item.indicators) {
            assert.ok(html.includes(`data-kind="${indicator.kind}"`), `missing badge for ${indicator.kind}`);
            assert.ok(html.includes(`badge-${indicator.status}`));
        }
    }
});
test("a mock page with 3 candidates renders 3 rows", () => {
    const template = page.items[0];
    const mock = {
        items: [1, 2, 3].map((n) => ({
            ...template,
            domain: `mock-${n}.test`,
        })),
        cursor: null,
        total: 3,
    };
    const html = renderQueue(applyQueuePage(initialState("run-ui"), mock));
    assert.equal(countMatches(html, /<article class="candidate"/g), 3);
    assert.ok(html.includes("mock-1.test"));
    assert.ok(html.includes("mock-3.test"));
});
test("rows show counts, whois dates and shared-title samples", () => {
    const withRegistration = page.items.find((i) => i.registration);
    assert.ok(withRegistration, "fixture should include registration data");
    const html = renderRow(withRegistration);
    assert.match(html, /origin articles/);
    assert.match(html, /created \d{4}-\d{2}-\d{2}/);
    if (withRegistration.shared_title_sample.length) {
        assert.match(html, /class="shared-titles"/);
    }
});
test("verdict buttons carry the domain and verdict", () => {
    const html = renderRow(page.items[0]);
    assert.ok(html.includes('data-verdict="confirmed_clone"'));
    assert.ok(html.includes('data-verdict="legitimate"'));
    assert.ok(html.includes('data-verdict="predatory"'));
    assert.ok(html.includes(`data-domain="${page.items[0].domain}"`));
});
test("status banner shows iteration and query count", () => {
    const state = applyStatus(applyQueuePage(initialState("run-ui"), page), status);
    const html = renderQueue(state);
    assert.ok(html.includes(`iteration ${status.iteration}`));
    assert.ok(html.includes(`${status.query_count} queries`));
});
test("empty queue renders the empty state", () => {
    const state = applyQueuePage(initialState("run-ui"), {
        items: [],
        cursor: null,
        total: 0,
    });
    assert.match(renderQueue(state), /queue is empty/);
});
test("401 renders the auth prompt", () => {
    const state = applyError(initialState("run-ui"), new ApiError(401, "unauthorized", "missing or invalid bearer token"));
    const html = renderQueue(state);
    assert.match(html, /auth-prompt/);
    assert.match(html, /token/i);
});
test("other API errors render an inline banner with retry", () => {
    const state = applyError(initialState("run-ui"), new ApiError(500, "error", "backend unavailable"));
    const html = renderQueue(state);
    assert.match(html, /error-banner/);
    assert.match(html, /backend unavailable/);
    assert.match(html, /data-action="retry"/);
});
test("html is escaped", () => {
    const item = {
        ...page.items[0],
        domain: 'evil<script>alert(1)</script>.test',
    };
    const html = renderRow(item);
    assert.ok(!html.includes("<script>"));
    assert.ok(html.includes("&lt;script&gt;"));
});
