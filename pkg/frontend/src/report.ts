// Final report view: pure HTML-string rendering so it is testable
// headless; the page injects the result.

import type { ReportDoc } from './protocol.js';

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

const COMPONENT_LABELS: [keyof ReportDoc['scores'], string][] = [
  ['facial', 'Facial palsy'],
  ['arm', 'Arm weakness'],
  ['speech', 'Speech / aphasia'],
  ['eye', 'Eye deviation'],
  ['neglect', 'Denial / neglect'],
];

export function renderReportHtml(
  report: ReportDoc | null,
  raw: string,
  videoBase: string | null = null,
): string {
  if (report === null || report.schema !== 'voice-report/1') {
    return (
      '<div class="panel error-panel"><h2>Malformed report</h2>' +
      `<pre>${escapeHtml(raw)}</pre></div>`
    );
  }
  const parts: string[] = ['<div class="report">'];

  const stroke = report.classification.stroke_likely;
  const lvo = report.classification.lvo_likely;
  parts.push(
    `<div class="banner ${stroke ? 'alert' : 'ok'}">` +
      `${stroke === null ? 'Stroke: not classified' : stroke ? 'Stroke likely' : 'Stroke unlikely'}` +
      '</div>',
    `<div class="banner ${lvo ? 'alert' : 'ok'}">` +
      `${lvo === null ? 'LVO: not classified' : lvo ? 'LVO likely' : 'LVO unlikely'}` +
      '</div>',
  );

  if (report.session.aborted) {
    parts.push('<div class="banner warn">Session aborted before completion</div>');
  }

  const s = report.scores;
  parts.push('<h2>FAST-ED scores</h2><table class="scores">');
  for (const [key, label] of COMPONENT_LABELS) {
    const value = s[key];
    parts.push(
      `<tr><td>${label}</td><td>${value === null ? 'not assessed' : value}</td></tr>`,
    );
  }
  const total = s.incomplete ? `at least ${s.partial_total} (incomplete)` : `${s.total}`;
  parts.push(`<tr class="total"><td>Total</td><td>${total} / 9</td></tr></table>`);

  if (report.summary_narrative) {
    parts.push(`<h2>Summary</h2><p>${escapeHtml(report.summary_narrative)}</p>`);
  }

  const anc = report.ancillary;
  const dose = anc.last_dose_time ? ` (last dose ${escapeHtml(anc.last_dose_time)})` : '';
  const glucose = anc.glucose_unmeasurable
    ? 'unmeasurable'
    : anc.glucose_mg_dl === null
      ? 'not recorded'
      : `${anc.glucose_mg_dl} mg/dL`;
  parts.push(
    '<h2>Patient</h2><table class="ancillary">',
    `<tr><td>Age</td><td>${report.demographics.age ?? 'not recorded'}</td></tr>`,
    `<tr><td>Sex</td><td>${escapeHtml(report.demographics.sex)}</td></tr>`,
    `<tr><td>Last known well</td><td>${escapeHtml(report.times.last_known_well ?? 'not recorded')}</td></tr>`,
    `<tr><td>Symptom onset</td><td>${escapeHtml(report.times.symptom_onset ?? 'not recorded')}</td></tr>`,
    `<tr><td>Anticoagulants</td><td>${
      anc.anticoagulants === null
        ? 'not asked'
        : anc.anticoagulants.length
          ? escapeHtml(anc.anticoagulants.join(', ')) + dose
          : 'none reported'
    }</td></tr>`,
    `<tr><td>Prior stroke</td><td>${escapeHtml(anc.prior_stroke ?? 'not recorded')}${
      anc.prior_stroke_detail ? ' - ' + escapeHtml(anc.prior_stroke_detail) : ''
    }</td></tr>`,
    `<tr><td>Glucose</td><td>${glucose}</td></tr>`,
    '</table>',
  );

  parts.push('<h2>Videos</h2>');
  if (report.videos.length === 0) {
    parts.push('<p class="muted">not recorded</p>');
  } else {
    for (const video of report.videos) {
      const src = videoBase
        ? `${videoBase}/sessions/${encodeURIComponent(report.session_id)}/videos/${video.component}`
        : video.uri;
      parts.push(
        `<figure><figcaption>${escapeHtml(video.component)} (${video.duration_s}s)</figcaption>` +
          `<video controls src="${escapeHtml(src)}" data-video-id="${escapeHtml(video.video_id)}"></video></figure>`,
      );
    }
  }

  if (report.completeness.missing.length) {
    parts.push(
      '<h2>Completeness warnings</h2><ul class="warnings">',
      ...report.completeness.missing.map((m) => `<li>${escapeHtml(m)} missing</li>`),
      '</ul>',
    );
  }

  if (report.discrepancies.length) {
    parts.push(
      '<h2>Discrepancies</h2><ul class="warnings">',
      ...report.discrepancies.map(
        (d) => `<li>${escapeHtml(d.kind)}: ${escapeHtml(d.detail)} (${escapeHtml(d.resolution)})</li>`,
      ),
      '</ul>',
    );
  }

  parts.push('<h2>Transcript</h2><ol class="transcript">');
  for (const turn of report.transcript) {
    parts.push(
      `<li class="${turn.speaker}"><span class="speaker">${turn.speaker}</span> ` +
        `${escapeHtml(turn.text)}</li>`,
    );
  }
  parts.push('</ol></div>');
  return parts.join('\n');
}
