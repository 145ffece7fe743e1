/**
 * HTML renderers. Pure string-producing functions so the queue view is
 * testable without a browser; main.ts swaps the output into the DOM.
 */
export function escapeHtml(text) {
    return text
        .replace(/&/g, "&amp;")
        .replace(/</g, "&lt;")
        .replace(/>/g, "&gt;")
        .replace(/"/g, "&quot;")
        .replace(/'/g, "&#39;");
}
const BADGE_LABELS = {
    issn_reuse: "ISSN",
    title_mutation: "Title",
    fake_doi: "DOI",
    recent_domain: "Domain-age",
    impact_factor_claim: "IF",
    free_email_contact: "Email",
    shared_content_overlap: "Overlap",
};
export function renderBadge(indicator) {
    const label = BADGE_LABELS[indicator.kind] ?? indicator.kind;
    return (`<span class="badge badge-${escapeHtml(indicator.status)}" ` +
        `data-kind="${escapeHtml(indicator.kind)}" ` +
        `title="${escapeHtml(indicator.detail)}">${escapeHtml(label)}</span>`);
}
function renderRegistration(item) {
    if (!item.registration)
        return '<span class="whois">whois: unavailable</span>';
    const created = item.registration.created ?? "n/a";
    const updated = item.registration.updated ?? "n/a";
    return `<span class="whois">created ${escapeHtml(created)} · updated ${escapeHtml(updated)}</span>`;
}
function renderSharedTitles(item) {
    if (!item.shared_title_sample.length)
        return "";
    const rows = item.shared_title_sample
        .map((shared) => `<li><span class="shared-site">${escapeHtml(shared.site)}</span> ` +
        `${escapeHtml(shared.title)}</li>`)
        .join("");
    return `<ul class="shared-titles">${rows}</ul>`;
}
export function renderRow(item) {
    const badges = item.indicators.map(renderBadge).join(" ");
    const score = Math.round(item.score * 100);
    return `
<article class="candidate" data-domain="${escapeHtml(item.domain)}">
  <header>
    <h3>${escapeHtml(item.domain)}</h3>
    <span class="score" title="clone score">${score}</span>
  </header>
  <div class="counts">
    ${item.hit_count} hits · ${item.distinct_origin_articles} origin articles ·
    ${item.distinct_origin_sites} origin sites · seen in iteration ${item.first_seen_iteration}
    (${escapeHtml(item.surfaced_by)})
  </div>
  <div class="badges">${badges}</div>
  ${renderRegistration(item)}
  ${renderSharedTitles(item)}
  <div class="actions">
    <button data-action="verdict" data-verdict="confirmed_clone"
            data-domain="${escapeHtml(item.domain)}">Confirm clone</button>
    <button data-action="verdict" data-verdict="legitimate"
            data-domain="${escapeHtml(item.domain)}">Legitimate</button>
    <button data-action="verdict" data-verdict="predatory"
            data-domain="${escapeHtml(item.domain)}">Predatory</button>
  </div>
</article>`;
}
export function renderStatusBanner(state) {
    const status = state.status;
    if (!status)
        return "";
    const busy = status.iterating ? " · iterating…" : "";
    const stopped = status.stop_reason ? ` · stopped (${escapeHtml(status.stop_reason)})` : "";
    return (`<div class="run-banner">run <strong>${escapeHtml(status.run_id)}</strong> · ` +
        `iteration ${status.iteration} · ${status.query_count} queries · ` +
        `${status.pending} awaiting verdict${busy}${stopped}</div>`);
}
export function renderNotices(state) {
    if (!state.notices.length)
        return "";
    const rows = state.notices
        .map((n) => `<li class="notice notice-${n.kind}">${escapeHtml(n.text)}</li>`)
        .join("");
    return `<ul class="notices">${rows}</ul>`;
}
export function renderQueue(state) {
    if (state.error && state.error.status === 401) {
        return `
<div class="auth-prompt">
  <p>This triage service requires a bearer token.</p>
  <input type="password" id="token-input" placeholder="API token">
  <button data-action="set-token">Sign in</button>
</div>`;
    }
    const banner = renderStatusBanner(state);
    const notices = renderNotices(state);
    if (state.error) {
        return (banner +
            notices +
            `<div class="error-banner">${escapeHtml(state.error.message)} ` +
            `<button data-action="retry">Retry</button></div>`);
    }
    if (!state.items.length) {
        return (banner +
            notices +
            `<div class="empty-state">The triage queue is empty. Confirm a candidate ` +
            `or trigger the next iteration.</div>`);
    }
    const rows = state.items.map(renderRow).join("\n");
    const more = state.cursor
        ? `<button data-action="load-more">Load more (${state.total} total)</button>`
        : "";
    return banner + notices + `<section class="queue">${rows}</section>` + more;
}
