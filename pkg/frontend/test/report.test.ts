// Report rendering: banners, score table, video placeholders,
// completeness warnings, and the malformed-payload panel.

import { readFileSync } from 'node:fs';
import { describe, expect, it } from 'vitest';

import type { ReportDoc } from '../src/protocol.js';
import { renderReportHtml } from '../src/report.js';

const reportRaw = readFileSync(
  new URL('../fixtures/table1_report.json', import.meta.url),
  'utf-8',
);
const report = JSON.parse(reportRaw) as ReportDoc;

describe('renderReportHtml', () => {
  it('renders banners, total, ancillary and transcript for the canonical run', () => {
    const html = renderReportHtml(report, reportRaw);
    expect(html).toContain('Stroke likely');
    expect(html).toContain('LVO likely');
    expect(html).toContain('6 / 9');
    expect(html).toContain('Facial palsy');
    expect(html).toContain('2025-02-28T21:00Z'); // last known well
    expect(html).toContain('none reported'); // anticoagulants
    expect(html).toContain('unmeasurable'); // glucose
    expect(html).toContain('data-video-id="v-s-table1-facial"');
    expect(html).toContain('sex_mismatch'); // clarified discrepancy on record
    const userTurns = report.transcript.filter((t) => t.speaker === 'user').length;
    expect(html.match(/<li class="user">/g)?.length).toBe(userTurns);
  });

  it('points video players at the gateway when a base is given', () => {
    const html = renderReportHtml(report, reportRaw, 'http://127.0.0.1:8763');
    expect(html).toContain(
      'src="http://127.0.0.1:8763/sessions/s-table1/videos/facial"',
    );
  });

  it('shows "not recorded" when no videos exist', () => {
    const noVideos = { ...report, videos: [] };
    const html = renderReportHtml(noVideos, reportRaw);
    expect(html).toContain('not recorded');
    expect(html).not.toContain('<video');
  });

  it('renders completeness warnings for aborted sessions', () => {
    const aborted: ReportDoc = {
      ...report,
      session: { ...report.session, aborted: true },
      completeness: { missing: ['findings.neglect', 'ancillary.glucose'] },
    };
    const html = renderReportHtml(aborted, reportRaw);
    expect(html).toContain('Session aborted');
    expect(html).toContain('findings.neglect missing');
  });

  it('falls back to an error panel with the raw payload', () => {
    const html = renderReportHtml(null, '{broken json');
    expect(html).toContain('Malformed report');
    expect(html).toContain('{broken json');
  });

  it('escapes markup in transcript text', () => {
    const hostile: ReportDoc = {
      ...report,
      transcript: [{ speaker: 'user', text: '<script>alert(1)</script>', at: 'x' }],
    };
    const html = renderReportHtml(hostile, reportRaw);
    expect(html).not.toContain('<script>alert');
    expect(html).toContain('&lt;script&gt;');
  });
});
