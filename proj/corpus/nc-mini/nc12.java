public class Answer {
    public static int balance(int days) {
        int credit = 0;
        for (int d = 0; d < days; d++) {
            if (d % 7 == 0) {
                credit = credit + 5;
            } else {
                credit = credit - 1;
            }
        }
        return credit;
    }
}
